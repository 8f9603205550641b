import java.util.InputMismatchException;
import java.util.Scanner;

public class AnswerPrompt {
    public int askCount(Scanner console) {
        int answer = -1;
        try {
            answer = console.nextInt();
        } catch (InputMismatchException e) {
            System.err.println("please give a whole number");
        }
        return answer;
    }
}
