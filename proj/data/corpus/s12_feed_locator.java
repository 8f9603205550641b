import java.net.MalformedURLException;
import java.net.URL;

public class FeedLocator {
    public URL locate(String address) {
        URL feed = null;
        try {
            feed = new URL(address);
        } catch (MalformedURLException e) {
            System.err.println("bad feed address: " + address);
        }
        return feed;
    }
}
