class PipelineError(Exception):
    pass


class TransformError(PipelineError):
    """A user function failed on one stream element."""

    def __init__(self, stage: str, item: object, cause: Exception) -> None:
        self.stage = stage
        self.item_repr = repr(item)
        super().__init__(f"{stage} failed on {self.item_repr}: {cause}")


class EmptyReduceError(PipelineError):
    pass
