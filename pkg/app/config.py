# app/config.py

from pathlib import Path

import yaml
from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from .models.terms import PrefixTable

# Variables in the project .env must be visible before pydantic reads the environment.
load_dotenv(dotenv_path=Path(__file__).parent.parent / ".env")

APP_DIR = Path(__file__).parent
PREFIX_CONFIG_FILE = APP_DIR / "prefixes.yaml"
VOCAB_FILE = APP_DIR / "vocab.tsv"
PACKS_DIR = APP_DIR.parent / "packs"


class AppSettings(BaseSettings):
    """
    Engine settings, loaded from environment variables and default values.
    Command-line flags override these for a single run.
    """

    # --- Application General Settings ---
    APP_NAME: str = "Consent Permission Reasoner"
    ENVIRONMENT: str = Field("development", validation_alias="APP_ENV")

    # --- Assets ---
    PACK_DIR: Path = Field(PACKS_DIR, validation_alias="CONSENT_PACK_DIR")
    VOCAB_PATH: Path = Field(VOCAB_FILE, validation_alias="CONSENT_VOCAB_PATH")
    PREFIX_CONFIG_PATH: Path = PREFIX_CONFIG_FILE

    # --- Reasoner ---
    MAX_ITERATIONS: int = Field(10_000, validation_alias="CONSENT_MAX_ITERATIONS", gt=0)
    EVALUATION_STRATEGY: str = Field("semi-naive", pattern=r"^(semi-naive|naive)$")
    MAX_WORKERS: int = Field(1, ge=1)

    LOG_LEVEL: str = "WARNING"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        populate_by_name=True,
        extra="ignore",
    )


# Created on first use so importing this module never reads the environment.
_app_config: AppSettings | None = None


def load_app_config() -> AppSettings:
    global _app_config
    if _app_config is None:
        _app_config = AppSettings()
    return _app_config


def get_prefix_conf(config_file_path: Path) -> dict[str, str]:
    """
    Loads the preloaded prefix table (prefix name -> base) from prefixes.yaml.
    The default prefix is written as the empty string key.
    """
    if not config_file_path.exists():
        raise FileNotFoundError(f"Prefix config file not found at: {config_file_path}")

    with open(config_file_path, "r", encoding="utf-8") as f:
        full_config = yaml.safe_load(f) or {}

    prefixes = full_config.get("prefixes")
    if not isinstance(prefixes, dict) or not prefixes:
        raise ValueError(f"No 'prefixes' mapping found in {config_file_path}")

    return {str(name or ""): str(base) for name, base in prefixes.items()}


def load_prefix_table(config_file_path: Path | None = None) -> PrefixTable:
    return PrefixTable(get_prefix_conf(config_file_path or load_app_config().PREFIX_CONFIG_PATH))
