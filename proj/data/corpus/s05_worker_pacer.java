public class WorkerPacer {
    public void pace(Thread worker) {
        try {
            Thread.sleep(200);
            worker.join();
        } catch (InterruptedException e) {
            Thread.currentThread().interrupt();
        }
    }
}
