public class Sample0031 extends CobolRuntime {
    @Pic("9(3)") private long ws_n1 = 43;
    @Pic("9(4)") private long ws_n2 = 0;
    @Pic("9(3)") private long ws_n3 = 0;
    @Pic("9(4)") private long ws_n4 = 0;
    @Pic("X(1)") private String ws_s1 = " ";
    @Pic("X(1)") private String ws_s2 = "Q";
    @Pic("9(4)") private long ws_rec_rec_id = 0;
    @Pic("X(6)") private String ws_rec_rec_name = "      ";
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
        step_1();
        step_3();
        System.exit(0);
    }

    private void step_1() {
        step_3();
        step_3();
        prog_CURRENCY(ws_s2, ws_n3);
    }

    private void step_2() {
        for (long _i1 = 0, _n1 = 1; _i1 < _n1; _i1 = _i1 + 1) {
            step_3();
        }
        prog_LEDGER(ws_s2, ws_s1);
        switch (ws_n1) {
            case 3:
                prog_CURRENCY();
                step_3();
                System.out.println("" + ws_rec_rec_name + ws_rec_rec_id + 1);
                break;
            case 2:
                prog_TAXCALC(ws_n4);
                break;
            case 1:
                step_3();
                break;
        }
    }

    private void step_3() {
        prog_RATE_LOOKUP(ws_n4);
        ws_n3 = ws_n4 + ws_n3;
    }

    @External("CURRENCY") private void prog_CURRENCY(Object... args) {
    }

    @External("LEDGER") private void prog_LEDGER(Object... args) {
    }

    @External("RATE-LOOKUP") private void prog_RATE_LOOKUP(Object... args) {
    }

    @External("TAXCALC") private void prog_TAXCALC(Object... args) {
    }
}
