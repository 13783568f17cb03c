public class Sample0019 extends CobolRuntime {
    @Pic("9(4)") private long ws_n1 = 40;
    @Pic("9(3)") private long ws_n2 = 46;
    @Pic("9(4)") private long ws_n3 = 0;
    @Pic("X(6)") private String ws_s1 = "OK    ";
    @Pic("X(4)") private String ws_s2 = "    ";
    @Pic("9(3)") private long ws_i1 = 0;
    @Pic("9(3)") private long ws_i2 = 0;
    @Pic("9(3)") private long ws_i3 = 0;

    public void run() {
        main_para();
        step_1();
        step_2();
    }

    private void main_para() {
        if (ws_n2 == ws_n3) {
            ws_n3 = (20 - ws_n3) / 4;
        }
        prog_AUDIT_LOG(ws_s1);
        main_para_part1();
    }

    private void step_1() {
        step_2();
        step_2();
    }

    private void step_2() {
        prog_LEDGER(ws_s2);
        step_2_part1();
    }

    private void main_para_part1() {
        for (long _i1 = 0, _n1 = 4; _i1 < _n1; _i1 = _i1 + 1) {
            for (long _i2 = 0, _n2 = 2; _i2 < _n2; _i2 = _i2 + 1) {
                step_1();
            }
            prog_LEDGER(ws_s1, ws_s2);
        }
        switch (ws_n2) {
            case 7:
                step_1();
                prog_AUDIT_LOG();
                break;
            case 3:
                prog_PRINT_LINE(ws_n2, ws_s2);
                step_2();
                step_1();
                break;
        }
        System.exit(0);
    }

    private void step_2_part1() {
        for (ws_i2 = 1; !(ws_i2 > 4); ws_i2 = ws_i2 + 2) {
            prog_CURRENCY();
            prog_TAXCALC(ws_n1, ws_n2);
            prog_RATE_LOOKUP(ws_n2, ws_n1);
        }
        prog_LEDGER(ws_n3);
    }

    @External("AUDIT-LOG") private void prog_AUDIT_LOG(Object... args) {
    }

    @External("CURRENCY") private void prog_CURRENCY(Object... args) {
    }

    @External("LEDGER") private void prog_LEDGER(Object... args) {
    }

    @External("PRINT-LINE") private void prog_PRINT_LINE(Object... args) {
    }

    @External("RATE-LOOKUP") private void prog_RATE_LOOKUP(Object... args) {
    }

    @External("TAXCALC") private void prog_TAXCALC(Object... args) {
    }
}
