import java.util.concurrent.BrokenBarrierException;
import java.util.concurrent.CyclicBarrier;

public class PhaseGate {
    private final CyclicBarrier barrier = new CyclicBarrier(4);

    public void arrive() {
        try {
            barrier.await();
        } catch (BrokenBarrierException e) {
            System.err.println("phase gate collapsed");
        } catch (InterruptedException e) {
            Thread.currentThread().interrupt();
        }
    }
}
