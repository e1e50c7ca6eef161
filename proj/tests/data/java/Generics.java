package fixtures;

import java.io.IOException;
import java.io.InputStream;
import java.util.*;

public class Generics {
    /**
     * Returns the first element of the list or the fallback value.
     *
     * @param items the list
     * @param fallback the value used when the list is empty
     * @return the first element
     */
    public static <T> T firstOr(List<T> items, T fallback) {
        return items.isEmpty() ? fallback : items.get(0);
    }

    /**
     * Reads all bytes from the {@code stream} into an array.
     */
    @Deprecated(since = "2.0")
    public byte[] readAll(InputStream stream) throws IOException, InterruptedException {
        return stream.readAllBytes();
    }

    /**
     * Maps keys to their lengths. Keys must not be null.
     */
    Map<String, Integer> lengths(Set<String> keys) {
        Map<String, Integer> out = new HashMap<>();
        for (String k : keys) out.put(k, k.length());
        return out;
    }
}
