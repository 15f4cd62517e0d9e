"""Exception types shared across the engine."""


class ChefMindError(Exception):
    """Base class for all engine errors."""


class MalformedRecord(ChefMindError):
    """A data file line failed parsing or field validation."""

    def __init__(self, line_no: int, cause: str):
        super().__init__(f"line {line_no}: {cause}")
        self.line_no = line_no
        self.cause = cause


class DuplicateId(ChefMindError):
    def __init__(self, duplicate_id: str):
        super().__init__(f"duplicate id: {duplicate_id}")
        self.duplicate_id = duplicate_id


class DanglingReference(ChefMindError):
    """A recipe references an ingredient node that was never defined."""

    def __init__(self, recipe_id: str, missing_id: str):
        super().__init__(f"recipe {recipe_id} references missing node {missing_id}")
        self.recipe_id = recipe_id
        self.missing_id = missing_id


class EmptyQuery(ChefMindError):
    pass


class RefinementFailed(ChefMindError):
    """All three refinement steps produced zero screening conditions."""


class NoCandidates(ChefMindError):
    """Every search level yielded nothing."""


class DimensionMismatch(ChefMindError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"expected dimension {expected}, got {got}")
        self.expected = expected
        self.got = got


class EmptyCandidates(ChefMindError):
    pass


class GeneratorTimeout(ChefMindError):
    pass


class GeneratorUnavailable(ChefMindError):
    pass


class EmbedderUnavailable(ChefMindError):
    pass


class ConfigError(ChefMindError):
    pass
