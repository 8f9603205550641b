public class QuotaParser {
    public long toQuota(String rawCount, String rawScale) {
        long quota = 0;
        try {
            int count = Integer.parseInt(rawCount);
            double scale = Double.parseDouble(rawScale);
        } catch (NumberFormatException e) {
            System.err.println("bad quota value");
        }
        return quota;
    }
}
