import java.lang.reflect.Field;

public class ColumnBinder {
    public Field bind(Class<?> row, String column) {
        Field bound = null;
        try {
            bound = row.getField(column);
        } catch (NoSuchFieldException e) {
            System.err.println("no column " + column + " on " + row.getSimpleName());
        }
        return bound;
    }
}
