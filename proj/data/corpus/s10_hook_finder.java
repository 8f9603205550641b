import java.lang.reflect.Method;

public class HookFinder {
    public Method locate(Class<?> owner, String hook) {
        Method found = null;
        try {
            found = owner.getMethod(hook);
            Method fallback = owner.getDeclaredMethod(hook, String.class);
        } catch (NoSuchMethodException e) {
            System.err.println("missing hook " + hook);
        }
        return found;
    }
}
