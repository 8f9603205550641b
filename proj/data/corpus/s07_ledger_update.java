import java.sql.Connection;
import java.sql.PreparedStatement;
import java.sql.SQLException;

public class LedgerUpdate {
    public int markSettled(Connection session, long id) {
        int changed = 0;
        try {
            PreparedStatement statement = session.prepareStatement("UPDATE ledger SET settled = 1 WHERE id = ?");
            changed = statement.executeUpdate();
        } catch (SQLException e) {
            System.err.println("settlement update failed for " + id);
        }
        return changed;
    }
}
