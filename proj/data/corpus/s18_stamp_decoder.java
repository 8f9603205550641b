import java.text.ParseException;
import java.text.SimpleDateFormat;
import java.util.Date;

public class StampDecoder {
    private final SimpleDateFormat format = new SimpleDateFormat("yyyy-MM-dd");

    public Date decode(String stamp) {
        Date decoded = null;
        try {
            decoded = format.parse(stamp);
        } catch (ParseException e) {
            System.err.println("unusable stamp: " + stamp);
        }
        return decoded;
    }
}
