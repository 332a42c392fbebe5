"""Exception hierarchy shared by all seqbreak modules."""


class SeqbreakError(Exception):
    """Base class for every error raised by this package."""


class DegenerateVariance(SeqbreakError, ValueError):
    pass


class TooShort(SeqbreakError, ValueError):
    pass


class BadWindow(SeqbreakError, ValueError):
    pass


class BadRange(SeqbreakError, IndexError):
    pass


class PatternSyntaxError(SeqbreakError, ValueError):
    """Malformed shape pattern; ``offset`` is the byte offset of the problem."""

    def __init__(self, message, text, offset):
        self.text = text
        self.offset = offset
        super().__init__(f"{message} at offset {offset}: {text!r}")


class IntervalOutOfBounds(SeqbreakError, ValueError):
    def __init__(self, seq_id, value, bounds):
        self.seq_id = seq_id
        self.value = value
        self.bounds = bounds
        super().__init__(
            f"interval {value} of {seq_id!r} outside bounds [{bounds[0]}, {bounds[1]}]"
        )


class ParseError(SeqbreakError, ValueError):
    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = f"{path}:{line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class DuplicateId(SeqbreakError, KeyError):
    def __str__(self):
        return f"id already in catalog: {self.args[0]!r}"


class UnknownId(SeqbreakError, KeyError):
    def __str__(self):
        return f"no such id in catalog: {self.args[0]!r}"


class BadSpec(SeqbreakError, ValueError):
    pass
