import java.io.BufferedReader;
import java.io.FileReader;
import java.io.IOException;

public class FileLineCounter {
    public int countLines(String path) {
        int total = 0;
        try {
            BufferedReader reader = new BufferedReader(new FileReader(path));
            String current = reader.readLine();
        } catch (IOException e) {
            System.err.println("unable to open " + path);
            e.printStackTrace();
        }
        return total;
    }
}
