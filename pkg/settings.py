# settings.py
from functools import lru_cache

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="SMOOTHCALC_", env_file=".env", extra="ignore")

    log_level: str = "WARNING"
    embed_search_depth: int = 3        # single-rule steps per embedding chain
    oracle_grid_n: int = 64
    oracle_alpha_step: str = "1/64"
    oracle_alpha_cap: str = "64"
    decimal_digits: int = 6
    svg_width: int = 640
    svg_height: int = 480


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    load_dotenv()
    return Settings()
