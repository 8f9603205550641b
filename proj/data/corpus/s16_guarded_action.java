import java.security.AccessControlException;

public class GuardedAction {
    public boolean attempt(SecurityManager guard, Object token) {
        try {
            guard.checkPermission(token);
        } catch (AccessControlException e) {
            System.err.println("action vetoed by policy");
            return false;
        }
        return true;
    }
}
