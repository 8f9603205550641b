public class WidgetCopier {
    public Object duplicate(WidgetTemplate template) {
        Object copy = null;
        try {
            copy = template.clone();
        } catch (CloneNotSupportedException e) {
            System.err.println("template refuses duplication");
        }
        return copy;
    }
}
