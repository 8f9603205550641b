public class PluginLoader {
    public Object activate(String typeName) {
        Object plugin = null;
        try {
            Class<?> type = Class.forName(typeName);
            plugin = type.newInstance();
        } catch (ClassNotFoundException e) {
            System.err.println("no such plugin: " + typeName);
        } catch (InstantiationException e) {
            System.err.println("plugin cannot be built: " + typeName);
        } catch (IllegalAccessException e) {
            System.err.println("plugin is sealed: " + typeName);
        }
        return plugin;
    }
}
