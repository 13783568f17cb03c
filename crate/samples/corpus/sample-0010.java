public class Sample0010 extends CobolRuntime {
    @Pic("9(3)") private long ws_n1 = 38;
    @Pic("9(4)") private long ws_n2 = 45;
    @Pic("X(2)") private String ws_s1 = "  ";
    @Pic("X(2)") private String ws_s2 = "  ";
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
        if (ws_n2 < ws_rec_rec_id) {
            step_1();
        }
        prog_LEDGER();
        System.exit(0);
    }

    private void step_1() {
        prog_RATE_LOOKUP();
        prog_AUDIT_LOG(ws_s2, ws_rec_rec_id);
    }

    @External("AUDIT-LOG") private void prog_AUDIT_LOG(Object... args) {
    }

    @External("LEDGER") private void prog_LEDGER(Object... args) {
    }

    @External("RATE-LOOKUP") private void prog_RATE_LOOKUP(Object... args) {
    }
}
