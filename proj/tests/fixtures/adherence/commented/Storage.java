package fixture.storage;

/**
 * I am the ledger that tracks the account.
 * The overview and essence of the abstraction.
 * The journal stores the record.
 */
public class Ledger {
}

/**
 * I am the archive that stores the bundle.
 * The overview and essence of the abstraction.
 * The cursor reads the frame.
 */
class Archive {
}

/**
 * I am the journal that writes the message.
 * The overview and essence of the abstraction.
 * The queue holds the packet.
 */
class Journal {
}
