"""Exception hierarchy shared by every npkg module."""


class NpkgError(Exception):
    """Base class for all errors raised by npkg."""


class DataError(NpkgError):
    """Input data is malformed or inconsistent. The CLI maps this to exit code 2."""


class ParseError(DataError):
    def __init__(self, path, line, message):
        self.path = str(path)
        self.line = line
        self.message = message
        super().__init__(f"{self.path}:{line}: {message}")


class DuplicateNode(DataError):
    def __init__(self, node_id, path=None, line=None):
        self.node_id = node_id
        self.path = path
        self.line = line
        where = f"{path}:{line}: " if path is not None else ""
        super().__init__(f"{where}duplicate node id {node_id!r}")


class RelationNotRegistered(DataError):
    def __init__(self, relation_id, path=None, line=None):
        self.relation_id = relation_id
        self.path = path
        self.line = line
        where = f"{path}:{line}: " if path is not None else ""
        super().__init__(f"{where}relation {relation_id!r} is not in the relation registry")


class RegistryMismatch(DataError):
    pass


class NodeNotFound(DataError):
    def __init__(self, node_id):
        self.node_id = node_id
        super().__init__(f"unknown node {node_id!r}")


class UnknownEndpoint(NodeNotFound):
    """Raised in strict mode when an edge names a node that was never declared."""


class GraphSealed(NpkgError):
    pass


class UndefinedChange(NpkgError):
    pass
