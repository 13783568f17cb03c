public class Sample0004 extends CobolRuntime {
    @Pic("9(5)") private long ws_n1 = 0;
    @Pic("9(5)") private long ws_n2 = 49;
    @Pic("9(5)") private long ws_n3 = 39;
    @Pic("9(2)") private long ws_n4 = 0;
    @Pic("X(2)") private String ws_s1 = "  ";
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
        prog_CURRENCY(ws_rec_rec_name);
        main_para_part1();
    }

    private void step_1() {
        prog_DATE_UTIL(ws_rec_rec_id);
        System.out.println("" + ws_s1 + ws_rec_rec_id);
    }

    private void main_para_part1_part1() {
        for (long _i2 = 0, _n2 = 1; _i2 < _n2; _i2 = _i2 + 1) {
            step_1();
        }
        System.exit(0);
    }

    private void main_para_part1() {
        for (long _i1 = 0, _n1 = 1; _i1 < _n1; _i1 = _i1 + 1) {
            step_1();
        }
        step_1();
        main_para_part1_part1();
    }

    @External("CURRENCY") private void prog_CURRENCY(Object... args) {
    }

    @External("DATE-UTIL") private void prog_DATE_UTIL(Object... args) {
    }
}
