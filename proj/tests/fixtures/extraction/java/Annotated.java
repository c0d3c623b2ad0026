import java.util.List;

/**
 * Maps keys to values.
 *   Indented continuation.
 */
@SuppressWarnings({"unchecked", "rawtypes"})
@Component(
    name = "store(x)")
public abstract class Annotated<K, V> {
}

/** Marker. */
public @interface Marker {}
