class Outer:
    '''Outer docstring.'''

    class Inner:
        """Inner docstring."""

        pass

    def method(self):
        class Local:
            r"""Raw \d docstring."""
