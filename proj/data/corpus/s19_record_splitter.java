import java.io.BufferedReader;
import java.io.FileReader;
import java.io.IOException;

public class RecordSplitter {
    public int firstRecord(String path) {
        String record = null;
        try {
            BufferedReader reader = new BufferedReader(new FileReader(path));
            record = reader.readLine();
        } catch (IOException e) {
            System.err.println("cannot load records from " + path);
        }
        int key = -1;
        try {
            key = Integer.parseInt(record);
        } catch (NumberFormatException e) {
            System.err.println("record key is not numeric");
        }
        return key;
    }
}
