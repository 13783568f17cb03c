public class Sample0022 extends CobolRuntime {
    @Pic("9(6)") private long ws_n1 = 41;
    @Pic("9(4)") private long ws_n2 = 0;
    @Pic("9(2)") private long ws_n3 = 35;
    @Pic("X(3)") private String ws_s1 = "   ";
    @Pic("X(6)") private String ws_s2 = "BETA  ";
    @Pic("X(7)") private String ws_s3 = "       ";
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
        switch (ws_n3) {
            case 3:
                prog_LEDGER(ws_n2, ws_n2);
                ws_n1 = readLong();
                step_1();
                break;
            case 4:
                step_1();
                break;
            case 9:
                System.out.println("" + ws_s3 + "GROSS" + ws_rec_rec_name);
                break;
            case 8:
                ws_n3 = readLong();
                prog_CURRENCY(ws_s2);
                ws_s3 = fit("DONE", 7);
                break;
        }
        step_1();
        System.exit(0);
    }

    private void step_1() {
        prog_LEDGER();
        ws_i2 = 0;
        step_1_part1();
    }

    private void step_1_part1() {
        while (!(ws_i2 >= 2)) {
            prog_TAXCALC(ws_n3);
            prog_RATE_LOOKUP();
            prog_TAXCALC();
            ws_i2 = 1 + ws_i2;
        }
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
