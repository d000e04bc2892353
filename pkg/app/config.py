"""Runtime settings and per-invocation configuration."""

import re
from fractions import Fraction
from functools import lru_cache
from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.coefficients import parse_rational
from app.families import FAMILIES, FunctionFamily, create_family
from app.finite_lie import parse_algebra_spec
from app.functions import Window

OutputFormat = Literal["json", "csv", "markdown"]
FamilyName = Literal["classical", "threepoint", "torus"]

_ASSIGNMENT = re.compile(r"^\s*([A-Za-z_]\w*)\s*=\s*(\S+)\s*$")


class Settings(BaseSettings):
    """Process-wide settings, read from KNALG_* environment variables or .env."""

    model_config = SettingsConfigDict(env_prefix="KNALG_", env_file=".env", extra="ignore")

    environment: str = Field(default="development", description="Environment name")
    debug: bool = Field(default=False, description="Enable debug output and API docs")
    log_level: str = Field(default="INFO", description="Root logging level")
    default_family: FamilyName = Field(default="threepoint", description="Family used when none is given")
    default_algebra: str = Field(default="sl2", description="Lie algebra used when none is given")
    default_window: str = Field(default="-4:4", description="Degree window LO:HI")
    max_workers: int = Field(default=1, ge=1, description="Threads used by verification sweeps")
    sample_budget: int = Field(default=200, ge=1, description="Tuples drawn by sampled checks")
    random_seed: int = Field(default=20051019, description="Seed for sampled checks")
    product_cache: bool = Field(default=True, description="Memoize torus basis products")

    @field_validator("default_window")
    @classmethod
    def _check_window(cls, value: str) -> str:
        Window.parse(value)
        return value


@lru_cache
def get_settings() -> Settings:
    """Shared settings object; call ``get_settings.cache_clear()`` after changing the env."""
    load_dotenv()
    return Settings()


def family_from_settings(name: str) -> FunctionFamily:
    """Create a family, honouring the product cache toggle for the torus."""
    kwargs = {"use_cache": get_settings().product_cache} if name == "torus" else {}
    return create_family(name, **kwargs)


class CliConfig(BaseModel):
    """Validated options of one CLI or API invocation."""

    family: FamilyName = Field(..., description="Function algebra family")
    algebra: str = Field(..., description="Lie algebra spec (sl2, gl(3), sl2+sl2) or 'none'")
    window: Window = Field(..., description="Degree window")
    format: OutputFormat = Field(default="json", description="Output format")
    assignments: dict[str, Fraction] = Field(
        default_factory=dict, description="Parameter substitutions applied to results"
    )
    extended: bool = Field(default=False, description="Use the centrally extended bracket")

    model_config = {"arbitrary_types_allowed": True}

    @field_validator("algebra")
    @classmethod
    def _check_algebra(cls, value: str) -> str:
        if value.strip().lower() != "none":
            parse_algebra_spec(value)
        return value

    @field_validator("window", mode="before")
    @classmethod
    def _parse_window(cls, value: object) -> Window:
        if isinstance(value, str):
            return Window.parse(value)
        if isinstance(value, list | tuple) and len(value) == 2:
            return Window(int(value[0]), int(value[1]))
        if isinstance(value, Window):
            return value
        raise ValueError(f"Cannot interpret {value!r} as a window")

    @field_validator("assignments", mode="before")
    @classmethod
    def _parse_assignments(cls, value: object) -> dict[str, Fraction]:
        if value is None:
            return {}
        if isinstance(value, dict):
            return {str(k): parse_rational(str(v)) for k, v in value.items()}
        parsed: dict[str, Fraction] = {}
        for item in value:  # type: ignore[union-attr]
            match = _ASSIGNMENT.match(str(item))
            if not match:
                raise ValueError(f"Expected name=value, got {item!r}")
            parsed[match.group(1)] = parse_rational(match.group(2))
        return parsed

    @model_validator(mode="after")
    def _check_assignments(self) -> "CliConfig":
        allowed = set(FAMILIES[self.family]().parameters)
        unknown = set(self.assignments) - allowed
        if unknown:
            raise ValueError(
                f"Parameters {', '.join(sorted(unknown))} do not belong to {self.family}; "
                f"allowed: {', '.join(sorted(allowed)) or 'none'}"
            )
        return self

    @property
    def function_only(self) -> bool:
        return self.algebra.strip().lower() == "none"
