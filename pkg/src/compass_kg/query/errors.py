class QueryError(Exception):
    """Base class for query-layer failures."""


class QuerySyntaxError(QueryError):
    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        suffix = f"; expected one of {', '.join(expected)}" if expected else ""
        super().__init__(f"{message} (line {line}, column {col}){suffix}")
        self.line = line
        self.col = col
        self.expected = expected


class UnsupportedFeatureError(QueryError):
    """A recognized SPARQL construct that lies outside the supported subset."""

    def __init__(self, feature: str, line: int, col: int):
        super().__init__(f"unsupported feature {feature} (line {line}, column {col})")
        self.feature = feature
        self.line = line
        self.col = col
