public class Sample0037 extends CobolRuntime {
    @Pic("9(3)") private long ws_n1 = 25;
    @Pic("9(2)") private long ws_n2 = 0;
    @Pic("9(4)") private long ws_n3 = 0;
    @Pic("9(4)") private long ws_n4 = 0;
    @Pic("X(8)") private String ws_s1 = "        ";
    @Pic("X(5)") private String ws_s2 = "OK   ";
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
        switch (ws_n4) {
            case 9:
                System.out.println(ws_n4);
                prog_PRINT_LINE(ws_n3, ws_s2);
                for (long _i1 = 0, _n1 = 2; _i1 < _n1; _i1 = _i1 + 1) {
                    step_1();
                }
                break;
            case 3:
                prog_PRINT_LINE();
                prog_LEDGER(ws_s1, ws_n2);
                for (long _i2 = 0, _n2 = 3; _i2 < _n2; _i2 = _i2 + 1) {
                    step_3();
                }
                break;
            case 5:
                for (long _i3 = 0, _n3 = 3; _i3 < _n3; _i3 = _i3 + 1) {
                    step_1();
                }
                step_2();
                step_1();
                break;
        }
        System.out.println("" + ws_n1 + ws_n4);
        System.exit(0);
    }

    private void step_1() {
        ws_s2 = fit("ALPHA", 5);
        prog_TAXCALC(ws_s2, ws_n3);
    }

    private void step_2() {
        if (ws_n4 > ws_n4) {
            prog_PRINT_LINE(ws_n1, ws_n4);
            for (long _i4 = 0, _n4 = 2; _i4 < _n4; _i4 = _i4 + 1) {
                step_3();
            }
        }
        prog_PRINT_LINE(ws_s2, ws_n4);
        step_2_part1();
    }

    private void step_3() {
        System.out.println(ws_n1);
        prog_CURRENCY(ws_n4, ws_n4);
        prog_RATE_LOOKUP();
    }

    private void step_2_part1() {
        for (long _i5 = 0, _n5 = 4; _i5 < _n5; _i5 = _i5 + 1) {
            System.out.println("" + ws_n3 + ws_s1 + ws_s2);
            prog_CURRENCY();
            for (long _i6 = 0, _n6 = 1; _i6 < _n6; _i6 = _i6 + 1) {
                step_3();
            }
        }
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
