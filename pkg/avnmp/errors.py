class AvnmpError(RuntimeError):
    """Base class for errors raised by the AVNMP engine"""


class ConfigError(AvnmpError, ValueError):
    """Invalid scenario configuration; `field` is the dotted config path"""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class ProtocolError(AvnmpError):
    """A protocol invariant was broken; the run cannot continue"""


class GvtViolation(ProtocolError):
    """A rollback would resume below the most recent global virtual time"""


class UnknownNodeError(AvnmpError, KeyError):
    def __init__(self, node):
        self.node = node
        super().__init__(f"unknown node {node!r}")

    def __str__(self):
        return self.args[0]
