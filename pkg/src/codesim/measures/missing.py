"""The MISSING sentinel: a score slot for timed-out, provider-less or
inapplicable measures. Falsy, singleton, pickle-stable."""


class MissingType:
    _singleton = None

    def __new__(cls):
        if cls._singleton is None:
            cls._singleton = super().__new__(cls)
        return cls._singleton

    def __repr__(self):
        return "MISSING"

    def __bool__(self):
        return False

    def __reduce__(self):
        return (MissingType, ())


MISSING = MissingType()


def is_missing(value) -> bool:
    return value is MISSING
