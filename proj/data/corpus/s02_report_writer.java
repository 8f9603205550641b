import java.io.FileOutputStream;
import java.io.FileWriter;
import java.io.IOException;

public class ReportWriter {
    public void exportReport(String target) {
        try {
            FileWriter writer = new FileWriter(target);
            FileOutputStream raw = new FileOutputStream(target + ".bin");
        } catch (IOException e) {
            System.err.println("export failed for " + target);
            e.printStackTrace();
        }
    }
}
