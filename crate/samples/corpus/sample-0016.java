public class Sample0016 extends CobolRuntime {
    @Pic("9(2)") private long ws_n1 = 0;
    @Pic("9(6)") private long ws_n2 = 50;
    @Pic("9(5)") private long ws_n3 = 48;
    @Pic("X(8)") private String ws_s1 = "        ";
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
        step_1();
        System.out.println("DONE");
        switch (rtrim(ws_rec_rec_name)) {
            case "OK":
                step_1();
                step_1();
                break;
            case "GROSS":
                prog_LEDGER(ws_n1, ws_n1);
                prog_PRINT_LINE(ws_s1, ws_rec_rec_name);
                break;
            default:
                prog_PRINT_LINE();
                prog_TAXCALC(ws_n2);
                prog_LEDGER();
        }
        System.exit(0);
    }

    private void step_1() {
        prog_DATE_UTIL(ws_n2, ws_s1);
        switch (ws_n3) {
            case 3:
                prog_TAXCALC();
                prog_LEDGER(ws_n1);
                break;
            case 5:
                prog_LEDGER(ws_rec_rec_name, ws_rec_rec_name);
                break;
        }
        prog_RATE_LOOKUP();
    }

    @External("DATE-UTIL") private void prog_DATE_UTIL(Object... args) {
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
