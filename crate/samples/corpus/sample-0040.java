public class Sample0040 extends CobolRuntime {
    @Pic("9(3)") private long ws_n1 = 0;
    @Pic("9(3)") private long ws_n2 = 0;
    @Pic("X(2)") private String ws_s1 = "  ";
    @Pic("X(6)") private String ws_s2 = "Q1    ";
    @Pic("9(3)") private long ws_i1 = 0;
    @Pic("9(3)") private long ws_i2 = 0;
    @Pic("9(3)") private long ws_i3 = 0;

    public void run() {
        main_para();
        step_1();
        step_2();
    }

    private void main_para() {
        step_1();
        main_para_part1();
    }

    private void step_1() {
        for (long _i1 = 0, _n1 = 3; _i1 < _n1; _i1 = _i1 + 1) {
            step_2();
        }
        step_1_part1();
    }

    private void step_2() {
        System.out.println("" + ws_n1 + 13);
        if (compare(ws_s2, ws_s1) < 0) {
            prog_AUDIT_LOG();
            prog_RATE_LOOKUP(ws_s2, ws_n2);
        }
        prog_PRINT_LINE(ws_s1);
    }

    private void main_para_part1() {
        for (ws_i3 = 1; !(ws_i3 > 4); ws_i3 = ws_i3 + 2) {
            step_1();
            prog_RATE_LOOKUP(ws_n1, ws_s1);
        }
        System.exit(0);
    }

    private void step_1_part1() {
        for (long _i2 = 0, _n2 = 2; _i2 < _n2; _i2 = _i2 + 1) {
            step_2();
        }
    }

    @External("AUDIT-LOG") private void prog_AUDIT_LOG(Object... args) {
    }

    @External("PRINT-LINE") private void prog_PRINT_LINE(Object... args) {
    }

    @External("RATE-LOOKUP") private void prog_RATE_LOOKUP(Object... args) {
    }
}
