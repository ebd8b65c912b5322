"""
Configuration management for ribbon-invariants.
Centralizes search bounds and numeric precision with environment variable support.
"""

import os
from pathlib import Path
from typing import Optional
from dataclasses import dataclass
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


@dataclass
class RibbonConfig:
    """Computation configuration with validation."""

    # Search bounds
    max_automorphisms: int = 512
    window_min: int = 2
    window_max: int = 12
    stable_windows: int = 3

    # Certified signature precision (decimal digits)
    signature_start_digits: int = 30
    signature_max_digits: int = 4000

    # Corpus verification
    corpus_workers: int = 1
    counterexample_dir: Path = Path("counterexamples")

    # Logging
    log_level: str = "WARNING"
    log_file: Optional[Path] = None

    # Performance
    cache_size: int = 256

    @classmethod
    def from_env(cls) -> "RibbonConfig":
        """Create configuration from environment variables."""
        return cls(
            # Search bounds
            max_automorphisms=int(os.getenv("RIBBON_MAX_AUT", "512")),
            window_min=int(os.getenv("RIBBON_WINDOW_MIN", "2")),
            window_max=int(os.getenv("RIBBON_WINDOW_MAX", "12")),
            stable_windows=int(os.getenv("RIBBON_STABLE_WINDOWS", "3")),
            # Precision
            signature_start_digits=int(os.getenv("RIBBON_SIGNATURE_DIGITS", "30")),
            signature_max_digits=int(
                os.getenv("RIBBON_SIGNATURE_MAX_DIGITS", "4000")
            ),
            # Corpus
            corpus_workers=int(os.getenv("RIBBON_CORPUS_WORKERS", "1")),
            counterexample_dir=Path(
                os.getenv("RIBBON_COUNTEREXAMPLE_DIR", "counterexamples")
            ),
            # Logging
            log_level=os.getenv("LOG_LEVEL", "WARNING"),
            log_file=Path(os.getenv("LOG_FILE")) if os.getenv("LOG_FILE") else None,
            # Performance
            cache_size=int(os.getenv("RIBBON_CACHE_SIZE", "256")),
        )

    def validate(self) -> None:
        """Validate configuration values."""
        if self.max_automorphisms <= 0:
            raise ValueError(
                f"max_automorphisms must be positive, got {self.max_automorphisms}"
            )

        if self.window_min <= 0:
            raise ValueError(f"window_min must be positive, got {self.window_min}")

        if self.window_min > self.window_max:
            raise ValueError(
                f"window_min ({self.window_min}) must not exceed "
                f"window_max ({self.window_max})"
            )

        if self.stable_windows < 1:
            raise ValueError(
                f"stable_windows must be at least 1, got {self.stable_windows}"
            )

        if self.signature_start_digits <= 0:
            raise ValueError(
                "signature_start_digits must be positive, "
                f"got {self.signature_start_digits}"
            )

        if self.signature_max_digits < self.signature_start_digits:
            raise ValueError(
                "signature_max_digits must be at least signature_start_digits, "
                f"got {self.signature_max_digits}"
            )

        if self.corpus_workers <= 0:
            raise ValueError(
                f"corpus_workers must be positive, got {self.corpus_workers}"
            )

        if self.cache_size <= 0:
            raise ValueError(f"cache_size must be positive, got {self.cache_size}")

        valid_log_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if self.log_level.upper() not in valid_log_levels:
            raise ValueError(
                f"Log level must be one of {valid_log_levels}, got {self.log_level}"
            )


# Global configuration instance
config = RibbonConfig.from_env()

# Validate on import
try:
    config.validate()
except ValueError as e:
    print(f"Configuration error: {e}")
    raise
