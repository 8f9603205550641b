public class ShareSplitter {
    public int perHead(int amount, int heads) {
        int share = 0;
        try {
            share = amount / heads;
        } catch (ArithmeticException e) {
            System.err.println("nobody to split between");
        }
        return share;
    }
}
