import java.io.IOException;
import java.io.OutputStream;
import java.net.Socket;
import java.net.SocketException;

public class ProbeClient {
    public void ping(String host, int port) {
        try {
            Socket probe = new Socket(host, port);
            try {
                probe.setSoTimeout(500);
            } catch (SocketException e) {
                System.err.println("cannot tune the probe");
            }
            OutputStream pipe = probe.getOutputStream();
        } catch (IOException e) {
            System.err.println("probe failed for " + host);
            e.printStackTrace();
        }
    }
}
