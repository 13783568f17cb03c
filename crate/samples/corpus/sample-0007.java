public class Sample0007 extends CobolRuntime {
    @Pic("9(6)") private long ws_n1 = 35;
    @Pic("9(5)") private long ws_n2 = 10;
    @Pic("9(6)") private long ws_n3 = 0;
    @Pic("9(2)") private long ws_n4 = 0;
    @Pic("X(1)") private String ws_s1 = " ";
    @Pic("9(4)") private long ws_rec_rec_id = 0;
    @Pic("X(6)") private String ws_rec_rec_name = "      ";
    @Pic("9(3)") private long ws_i1 = 0;
    @Pic("9(3)") private long ws_i2 = 0;
    @Pic("9(3)") private long ws_i3 = 0;

    public void run() {
        main_para();
        step_1();
    }

    private void main_para() {
        for (long _i1 = 0, _n1 = 1; _i1 < _n1; _i1 = _i1 + 1) {
            step_1();
        }
        main_para_part1();
    }

    private void step_1() {
        ws_n1 = ws_rec_rec_id;
        prog_LEDGER(ws_s1, ws_n1);
        prog_RATE_LOOKUP(ws_rec_rec_id, ws_n1);
    }

    private void main_para_part1() {
        for (long _i2 = 0, _n2 = 3; _i2 < _n2; _i2 = _i2 + 1) {
            step_1();
        }
        System.exit(0);
    }

    @External("LEDGER") private void prog_LEDGER(Object... args) {
    }

    @External("RATE-LOOKUP") private void prog_RATE_LOOKUP(Object... args) {
    }
}
