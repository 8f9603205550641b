import java.net.Socket;
import java.net.SocketException;

public class ProbeTuner {
    public void tune(Socket probe) {
        try {
            probe.setSoTimeout(750);
        } catch (SocketException e) {
            System.err.println("probe keeps the default deadline");
        }
    }
}
