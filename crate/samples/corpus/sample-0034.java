public class Sample0034 extends CobolRuntime {
    @Pic("9(5)") private long ws_n1 = 0;
    @Pic("9(5)") private long ws_n2 = 45;
    @Pic("9(6)") private long ws_n3 = 0;
    @Pic("9(6)") private long ws_n4 = 0;
    @Pic("X(4)") private String ws_s1 = "    ";
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
        prog_DATE_UTIL();
        ws_s1 = fit("TOTAL", 4);
        prog_TAXCALC(ws_n2, ws_rec_rec_id);
        prog_CURRENCY();
        System.exit(0);
    }

    private void step_1() {
        switch (ws_n2) {
            case 2:
                prog_TAXCALC(ws_n3);
                prog_DATE_UTIL(ws_rec_rec_id, ws_s1);
                ws_n3 = ws_n3 + ws_n2;
                break;
            case 8:
                ws_rec_rec_name = fit(ws_s1, 6);
                break;
        }
        prog_CURRENCY();
        prog_RATE_LOOKUP(ws_n2, ws_s1);
    }

    @External("CURRENCY") private void prog_CURRENCY(Object... args) {
    }

    @External("DATE-UTIL") private void prog_DATE_UTIL(Object... args) {
    }

    @External("RATE-LOOKUP") private void prog_RATE_LOOKUP(Object... args) {
    }

    @External("TAXCALC") private void prog_TAXCALC(Object... args) {
    }
}
