public class Sample0028 extends CobolRuntime {
    @Pic("9(4)") private long ws_n1 = 0;
    @Pic("9(2)") private long ws_n2 = 38;
    @Pic("9(6)") private long ws_n3 = 31;
    @Pic("X(8)") private String ws_s1 = "ERR     ";
    @Pic("X(5)") private String ws_s2 = "     ";
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
        prog_CURRENCY(ws_s1);
        prog_RATE_LOOKUP(ws_n2, ws_n2);
        System.exit(0);
    }

    private void step_1() {
        prog_LEDGER(ws_s2);
        step_1_part1();
    }

    private void step_1_part1() {
        for (ws_i1 = 1; !(ws_i1 > 4); ws_i1 = ws_i1 + 1) {
            prog_TAXCALC();
            ws_n2 = ws_rec_rec_id;
            prog_TAXCALC();
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
