import logging
from pathlib import Path
from typing import Any

from jinja2 import Template

logger = logging.getLogger(__name__)

TEMPLATES_DIR = Path(__file__).resolve().parents[2] / "templates"


class TemplateError(Exception):
    pass


class ReportLoader:
    """Renders the plain-text report templates under templates/."""

    def __init__(self, directory: Path = TEMPLATES_DIR) -> None:
        self._directory = directory

    def render(self, name: str, **kwargs: Any) -> str:
        path = self._directory / f"{name}.txt"
        try:
            with open(path) as f:
                template = Template(f.read())
        except OSError as e:
            logger.error(f"Failed to load report template: {name}")
            raise TemplateError(f"Cannot read template {path}: {e}") from e
        return template.render(**kwargs).strip()

    def resetwords_report(self, n_states: int, n_symbols: int, length: int) -> str:
        return self.render("resetwords_report", n_states=n_states, n_symbols=n_symbols, length=length)

    def summary(self, count: int, seconds: float, workers: int = 1) -> str:
        return self.render("summary", count=count, seconds=seconds, workers=workers)
