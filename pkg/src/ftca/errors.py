"""Exception types shared across modules."""


class FtcaError(Exception):
    pass


class TorusTooSmall(FtcaError):
    pass


class ParseError(FtcaError):
    pass


class BadHeader(ParseError):
    pass


class BadDimensions(ParseError):
    pass


class BadSymbol(ParseError):
    pass


class BadRuleName(ParseError):
    pass


class GridMismatch(FtcaError):
    pass


class CellInitiallyActive(FtcaError):
    pass


class NotInGraph(FtcaError):
    pass


class NotATree(FtcaError):
    pass


class EmptySources(FtcaError):
    pass


class NetlistError(FtcaError):
    pass


class NetlistCycle(NetlistError):
    pass


class UnroutableNetlist(NetlistError):
    pass
