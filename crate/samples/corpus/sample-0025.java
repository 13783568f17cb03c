public class Sample0025 extends CobolRuntime {
    @Pic("9(4)") private long ws_n1 = 0;
    @Pic("9(6)") private long ws_n2 = 39;
    @Pic("X(4)") private String ws_s1 = "    ";
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
        switch (ws_n2) {
            case 8:
                prog_LEDGER(ws_n2, ws_rec_rec_id);
                System.out.println("ALPHA");
                break;
            case 4:
                step_2();
                break;
            case 6:
                step_2();
                prog_DATE_UTIL(ws_rec_rec_name, ws_s1);
                break;
        }
        prog_PRINT_LINE(ws_rec_rec_name);
        step_2();
        prog_DATE_UTIL(ws_n2);
        System.exit(0);
    }

    private void step_1() {
        step_2();
        step_1_part1();
    }

    private void step_2() {
        ws_n1 = 1 * ws_n1;
        System.out.println("" + "Q1" + ws_s1);
        prog_DATE_UTIL();
    }

    private void step_1_part1() {
        for (long _i1 = 0, _n1 = 3; _i1 < _n1; _i1 = _i1 + 1) {
            step_2();
        }
    }

    @External("DATE-UTIL") private void prog_DATE_UTIL(Object... args) {
    }

    @External("LEDGER") private void prog_LEDGER(Object... args) {
    }

    @External("PRINT-LINE") private void prog_PRINT_LINE(Object... args) {
    }
}
