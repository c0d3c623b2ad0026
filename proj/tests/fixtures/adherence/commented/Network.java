package fixture.network;

/**
 * I am the socket that reads the packet.
 * The overview and essence of the abstraction.
 * The channel updates the session.
 */
public class Socket {

    /**
     * I am the frame that holds the signal.
     * The overview and essence of the abstraction.
     * The window tracks the cursor.
     */
    static class Frame {
    }
}

/**
 * The channel should not write the message.
 * The hazard and caveat of the pitfall.
 * The session loads the profile.
 */
class Channel {
}
