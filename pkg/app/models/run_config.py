# app/models/run_config.py

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..exceptions import RunConfigError


class RunConfig(BaseModel):
    """Inputs and output options for one ``reason`` or ``explain`` run."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    facts: list[Path] = Field(default_factory=list)
    rules: list[Path] = Field(default_factory=list)
    axioms: list[Path] = Field(default_factory=list)
    out: Path | None = None
    format: Literal["text", "structured"] = "text"
    vocab: Path | None = None
    max_iterations: int | None = Field(None, gt=0)
    strategy: Literal["semi-naive", "naive"] | None = None
    annotate: bool = False
    derived_only: bool = False

    @model_validator(mode="after")
    def _output_is_not_an_input(self) -> "RunConfig":
        if self.out is not None:
            inputs = {p.resolve() for p in self.facts + self.rules + self.axioms}
            if self.out.resolve() in inputs:
                raise ValueError(f"output path {self.out} is also an input")
        return self

    def require_sources(self) -> None:
        if not self.facts:
            raise RunConfigError("at least one fact file is required (--facts or --pack)")
        if not self.rules:
            raise RunConfigError("at least one rule file is required (--rules or --pack)")
