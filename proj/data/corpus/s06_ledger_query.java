import java.sql.Connection;
import java.sql.DriverManager;
import java.sql.ResultSet;
import java.sql.SQLException;
import java.sql.Statement;

public class LedgerQuery {
    private Connection session;

    public int countRows(String jdbc) {
        int rows = 0;
        try {
            session = DriverManager.getConnection(jdbc);
            Statement statement = session.createStatement();
            ResultSet result = statement.executeQuery("SELECT id FROM ledger");
        } catch (SQLException e) {
            System.err.println("ledger lookup failed");
            e.printStackTrace();
        } finally {
            closeQuietly();
        }
        return rows;
    }

    private void closeQuietly() {
        session = null;
    }
}
