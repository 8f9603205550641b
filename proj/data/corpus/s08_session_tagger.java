import java.sql.Connection;
import java.sql.SQLClientInfoException;

public class SessionTagger {
    public void tag(Connection session, String owner) {
        try {
            session.setClientInfo("ApplicationName", owner);
        } catch (SQLClientInfoException e) {
            System.err.println("cannot tag the session for " + owner);
        }
    }
}
