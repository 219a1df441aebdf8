"""Exception hierarchy shared by the library and the CLI."""


class QRealsError(Exception):
    """Base class; the CLI maps these to exit status 1."""
