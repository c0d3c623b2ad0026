package fixture.bare;

public class Bare {
    // Not a class comment.
    private int size;
}

class Helper {
}
