import logging
import os
from dataclasses import dataclass, replace

from dotenv import load_dotenv

from src.errors import ConfigError


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        return int(raw, 0)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None


def _env_bool(name: str, default: bool) -> bool:
    raw = os.environ.get(name, "").strip().lower()
    if not raw:
        return default
    if raw in ("1", "true", "yes", "on"):
        return True
    if raw in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{name} must be a boolean, got {raw!r}")


@dataclass(frozen=True)
class Settings:
    """Size limits and run options. Defaults keep every command at desk scale."""

    field_cap: int = 2**20
    max_q: int = 31
    enumeration_cap: int = 2500
    census_full_max_q: int = 13
    census_window_max_q: int = 17
    oracle_max_vertices: int = 25
    oracle_max_cap: int = 8
    threads: int = 1
    debug_verify: bool = False
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "Settings":
        load_dotenv()
        level = os.environ.get("PALEY_LOG_LEVEL", "").strip().upper() or cls.log_level
        if not isinstance(logging.getLevelName(level), int):
            raise ConfigError(f"PALEY_LOG_LEVEL must be a logging level, got {level!r}")
        settings = cls(
            field_cap=_env_int("PALEY_FIELD_CAP", cls.field_cap),
            max_q=_env_int("PALEY_MAX_Q", cls.max_q),
            enumeration_cap=_env_int("PALEY_ENUMERATION_CAP", cls.enumeration_cap),
            census_full_max_q=_env_int("PALEY_CENSUS_FULL_MAX_Q", cls.census_full_max_q),
            census_window_max_q=_env_int("PALEY_CENSUS_WINDOW_MAX_Q", cls.census_window_max_q),
            oracle_max_vertices=_env_int("PALEY_ORACLE_MAX_VERTICES", cls.oracle_max_vertices),
            oracle_max_cap=_env_int("PALEY_ORACLE_MAX_CAP", cls.oracle_max_cap),
            threads=_env_int("PALEY_THREADS", cls.threads),
            debug_verify=_env_bool("PALEY_DEBUG_VERIFY", cls.debug_verify),
            log_level=level,
        )
        if settings.threads < 1:
            raise ConfigError("PALEY_THREADS must be at least 1")
        return settings

    def with_cap(self, q: int) -> "Settings":
        """Raise every q-based limit to `q` (the CLI's --cap)."""
        return replace(
            self,
            max_q=max(self.max_q, q),
            census_full_max_q=max(self.census_full_max_q, q),
            census_window_max_q=max(self.census_window_max_q, q),
            enumeration_cap=max(self.enumeration_cap, q * q),
        )


DEFAULT_SETTINGS = Settings()
