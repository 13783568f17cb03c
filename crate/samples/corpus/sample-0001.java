public class Sample0001 extends CobolRuntime {
    @Pic("9(2)") private long ws_n1 = 0;
    @Pic("9(5)") private long ws_n2 = 0;
    @Pic("9(3)") private long ws_n3 = 0;
    @Pic("9(5)") private long ws_n4 = 0;
    @Pic("X(5)") private String ws_s1 = "     ";
    @Pic("X(4)") private String ws_s2 = "    ";
    @Pic("9(3)") private long ws_i1 = 0;
    @Pic("9(3)") private long ws_i2 = 0;
    @Pic("9(3)") private long ws_i3 = 0;

    public void run() {
        main_para();
        step_1();
        step_2();
        step_3();
    }

    private void main_para() {
        prog_DATE_UTIL(ws_n3);
        step_1();
        main_para_part1();
    }

    private void step_1() {
        ws_s2 = fit(readString(), 4);
        step_3();
        System.out.println("" + ws_n3 + "OK");
    }

    private void step_2() {
        step_3();
        step_3();
    }

    private void step_3() {
        switch (ws_n3) {
            case 1:
                prog_CURRENCY(ws_n4, ws_n4);
                break;
            case 2:
                prog_CURRENCY();
                prog_PRINT_LINE(ws_n2);
                ws_s1 = fit(readString(), 5);
                break;
        }
        prog_CURRENCY(ws_n3, ws_s1);
        prog_AUDIT_LOG(ws_s2, ws_n3);
    }

    private void main_para_part1() {
        for (long _i1 = 0, _n1 = 2; _i1 < _n1; _i1 = _i1 + 1) {
            step_2();
        }
        step_3();
        System.exit(0);
    }

    @External("AUDIT-LOG") private void prog_AUDIT_LOG(Object... args) {
    }

    @External("CURRENCY") private void prog_CURRENCY(Object... args) {
    }

    @External("DATE-UTIL") private void prog_DATE_UTIL(Object... args) {
    }

    @External("PRINT-LINE") private void prog_PRINT_LINE(Object... args) {
    }
}
