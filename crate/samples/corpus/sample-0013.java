public class Sample0013 extends CobolRuntime {
    @Pic("9(3)") private long ws_n1 = 0;
    @Pic("9(5)") private long ws_n2 = 0;
    @Pic("9(6)") private long ws_n3 = 0;
    @Pic("X(3)") private String ws_s1 = "   ";
    @Pic("9(4)") private long ws_rec_rec_id = 0;
    @Pic("X(6)") private String ws_rec_rec_name = "      ";
    @Pic("9(3)") private long ws_i1 = 0;
    @Pic("9(3)") private long ws_i2 = 0;
    @Pic("9(3)") private long ws_i3 = 0;

    public void run() {
        main_para();
        step_1();
        step_2();
    }

    private void main_para() {
        if (ws_n2 > ws_n1) {
            step_2();
            step_1();
            prog_RATE_LOOKUP(ws_rec_rec_name, ws_s1);
        } else {
            for (long _i1 = 0, _n1 = 3; _i1 < _n1; _i1 = _i1 + 1) {
                step_2();
            }
        }
        prog_TAXCALC(ws_rec_rec_id, ws_s1);
        System.exit(0);
    }

    private void step_1() {
        step_2();
        ws_rec_rec_id = ws_n2 + ws_rec_rec_id;
    }

    private void step_2() {
        System.out.println("" + ws_s1 + ws_n1);
        prog_AUDIT_LOG();
    }

    @External("AUDIT-LOG") private void prog_AUDIT_LOG(Object... args) {
    }

    @External("RATE-LOOKUP") private void prog_RATE_LOOKUP(Object... args) {
    }

    @External("TAXCALC") private void prog_TAXCALC(Object... args) {
    }
}
