package fixtures;

import java.util.ArrayList;
import java.util.List;

public class Nested {
    private final List<Runnable> tasks = new ArrayList<>();

    /**
     * Creates an empty container for tasks.
     */
    public Nested() {
        super();
    }

    /**
     * Registers two tasks that print the given message.
     */
    public void register(String message) {
        tasks.add(() -> {
            System.out.println(message);
        });
        tasks.add(new Runnable() {
            @Override
            public void run() {
                System.out.println(message);
            }
        });
    }

    static class Inner {
        /**
         * Doubles the input value for the caller.
         */
        int twice(int x) {
            return 2 * x;
        }
    }
}
