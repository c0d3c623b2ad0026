/** Real documentation. */
class Strings {
    String a = "/** fake */ class Fake {}";
    char quote = '"';
    String b = """
        /** still text */ class AlsoFake {}
        """;
}

/** Second top-level class. */
final class Tail {}
