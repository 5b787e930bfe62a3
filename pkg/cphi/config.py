"""Workbench settings for cphi.

Handles loading and validating settings from:
1. ~/.cphi/config.toml (user-level)
2. .cphi/config.toml (project-level)
3. Environment variables (highest priority)
"""

import os
from pathlib import Path
from typing import Any, Dict, Optional
try:
    import tomllib  # Python 3.11+
except ImportError:
    import tomli as tomllib  # fallback for older Python

from cphi.errors import CphiError
from cphi.hardy.function import is_power_of_two


class ConfigurationError(CphiError):
    """Raised when configuration is invalid or missing."""
    pass


NORM_METHODS = ("svd", "power")


class NumericsConfig:
    """Budgets of the H^2 representation and of the dilation quadrature."""
    
    def __init__(
        self,
        budget: int = 4096,
        oversample: int = 4,
        dilation_steps: int = 16,
        dilation_margin: float = 60.0,
    ):
        self.budget = budget
        self.oversample = oversample
        self.dilation_steps = dilation_steps
        self.dilation_margin = dilation_margin
    
    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "NumericsConfig":
        """Create config from dictionary."""
        return cls(
            budget=data.get("budget", 4096),
            oversample=data.get("oversample", 4),
            dilation_steps=data.get("dilation_steps", 16),
            dilation_margin=data.get("dilation_margin", 60.0),
        )
    
    def to_dict(self) -> Dict[str, Any]:
        """Convert config to dictionary."""
        return {
            "budget": self.budget,
            "oversample": self.oversample,
            "dilation_steps": self.dilation_steps,
            "dilation_margin": self.dilation_margin,
        }
    
    def validate(self):
        """Validate configuration values.
        
        Raises:
            ConfigurationError: If configuration is invalid
        """
        if not is_power_of_two(self.budget):
            raise ConfigurationError(f"budget must be a power of two, got {self.budget}")
        
        if not is_power_of_two(self.oversample):
            raise ConfigurationError(f"oversample must be a power of two, got {self.oversample}")
        
        if self.dilation_margin <= 0:
            raise ConfigurationError(f"dilation_margin must be positive, got {self.dilation_margin}")
        
        if self.dilation_steps < 1:
            raise ConfigurationError(f"dilation_steps must be positive, got {self.dilation_steps}")


class VerificationConfig:
    """Tolerances of the numerical checks."""
    
    def __init__(
        self,
        radial_constant: float = 2.0,
        exceptional_ratio: float = 1e-10,
        residual_tol: float = 1e-4,
        norm_method: str = "svd",
        power_iteration_tol: float = 1e-10,
        power_iteration_max: int = 5000,
    ):
        self.radial_constant = radial_constant
        self.exceptional_ratio = exceptional_ratio
        self.residual_tol = residual_tol
        self.norm_method = norm_method
        self.power_iteration_tol = power_iteration_tol
        self.power_iteration_max = power_iteration_max
    
    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "VerificationConfig":
        """Create config from dictionary."""
        return cls(
            radial_constant=data.get("radial_constant", 2.0),
            exceptional_ratio=data.get("exceptional_ratio", 1e-10),
            residual_tol=data.get("residual_tol", 1e-4),
            norm_method=data.get("norm_method", "svd"),
            power_iteration_tol=data.get("power_iteration_tol", 1e-10),
            power_iteration_max=data.get("power_iteration_max", 5000),
        )
    
    def to_dict(self) -> Dict[str, Any]:
        """Convert config to dictionary."""
        return {
            "radial_constant": self.radial_constant,
            "exceptional_ratio": self.exceptional_ratio,
            "residual_tol": self.residual_tol,
            "norm_method": self.norm_method,
            "power_iteration_tol": self.power_iteration_tol,
            "power_iteration_max": self.power_iteration_max,
        }
    
    def validate(self):
        """Validate configuration values.
        
        Raises:
            ConfigurationError: If configuration is invalid
        """
        if self.radial_constant < 1.0:
            raise ConfigurationError(f"radial_constant must be >= 1, got {self.radial_constant}")
        
        for name in ("exceptional_ratio", "residual_tol", "power_iteration_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ConfigurationError(f"{name} must be in (0, 1), got {value}")
        
        if self.norm_method not in NORM_METHODS:
            raise ConfigurationError(
                f"norm_method must be one of {', '.join(NORM_METHODS)}, got {self.norm_method!r}"
            )
        
        if self.power_iteration_max <= 0:
            raise ConfigurationError(f"power_iteration_max must be positive, got {self.power_iteration_max}")


class ReportsConfig:
    """Where and how reports are written."""
    
    def __init__(
        self,
        out_dir: str = "reports",
        float_digits: int = 17,
        verbose: bool = False,
    ):
        self.out_dir = out_dir
        self.float_digits = float_digits
        self.verbose = verbose
    
    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ReportsConfig":
        """Create config from dictionary."""
        return cls(
            out_dir=data.get("out_dir", "reports"),
            float_digits=data.get("float_digits", 17),
            verbose=data.get("verbose", False),
        )
    
    def to_dict(self) -> Dict[str, Any]:
        """Convert config to dictionary."""
        return {
            "out_dir": self.out_dir,
            "float_digits": self.float_digits,
            "verbose": self.verbose,
        }
    
    def validate(self):
        """Validate configuration values.
        
        Raises:
            ConfigurationError: If configuration is invalid
        """
        if not self.out_dir:
            raise ConfigurationError("out_dir must not be empty")
        
        if not 1 <= self.float_digits <= 17:
            raise ConfigurationError(f"float_digits must be 1-17, got {self.float_digits}")


class CphiConfig:
    """Main cphi configuration."""
    
    def __init__(
        self,
        numerics: Optional[NumericsConfig] = None,
        verification: Optional[VerificationConfig] = None,
        reports: Optional[ReportsConfig] = None,
    ):
        self.numerics = numerics or NumericsConfig()
        self.verification = verification or VerificationConfig()
        self.reports = reports or ReportsConfig()
    
    @classmethod
    def load(cls, project_dir: Optional[Path] = None) -> "CphiConfig":
        """Load configuration from files and environment.
        
        Priority (highest to lowest):
        1. Environment variables
        2. Project config (.cphi/config.toml)
        3. User config (~/.cphi/config.toml)
        4. Defaults
        
        Args:
            project_dir: Project directory (defaults to cwd)
            
        Returns:
            Merged configuration
        
        Raises:
            ConfigurationError: If a file cannot be parsed or a value is invalid
        """
        config_data: Dict[str, Any] = {"numerics": {}, "verification": {}, "reports": {}}
        
        user_config = Path.home() / ".cphi" / "config.toml"
        config_data = cls._merge_config(config_data, cls._read(user_config))
        
        if project_dir is None:
            project_dir = Path.cwd()
        project_config = Path(project_dir) / ".cphi" / "config.toml"
        config_data = cls._merge_config(config_data, cls._read(project_config))
        
        config_data = cls._apply_env_overrides(config_data)
        
        config = cls(
            numerics=NumericsConfig.from_dict(config_data.get("numerics", {})),
            verification=VerificationConfig.from_dict(config_data.get("verification", {})),
            reports=ReportsConfig.from_dict(config_data.get("reports", {})),
        )
        config.validate()
        
        return config
    
    @staticmethod
    def _read(path: Path) -> Dict[str, Any]:
        if not path.exists():
            return {}
        try:
            with open(path, "rb") as f:
                return tomllib.load(f)
        except tomllib.TOMLDecodeError as e:
            raise ConfigurationError(f"cannot parse {path}: {e}")
    
    @staticmethod
    def _merge_config(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """Merge configuration dictionaries."""
        result = base.copy()
        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = CphiConfig._merge_config(result[key], value)
            else:
                result[key] = value
        return result
    
    @staticmethod
    def _apply_env_overrides(config: Dict[str, Any]) -> Dict[str, Any]:
        """Apply environment variable overrides.
        
        Environment variables:
        - CPHI_BUDGET: Coefficient budget (power of two)
        - CPHI_OVERSAMPLE: Boundary grid oversampling factor
        - CPHI_RESIDUAL_TOL: Eigen-residual tolerance
        - CPHI_RADIAL_CONSTANT: Constant C in radial <= C x Hardy-Littlewood
        - CPHI_OUT_DIR: Report directory
        - CPHI_VERBOSE: Debug logging (true/false)
        """
        numerics = config.setdefault("numerics", {})
        verification = config.setdefault("verification", {})
        reports = config.setdefault("reports", {})
        
        try:
            if budget := os.getenv("CPHI_BUDGET"):
                numerics["budget"] = int(budget)
            
            if oversample := os.getenv("CPHI_OVERSAMPLE"):
                numerics["oversample"] = int(oversample)
            
            if tol := os.getenv("CPHI_RESIDUAL_TOL"):
                verification["residual_tol"] = float(tol)
            
            if constant := os.getenv("CPHI_RADIAL_CONSTANT"):
                verification["radial_constant"] = float(constant)
        except ValueError as e:
            raise ConfigurationError(f"invalid environment override: {e}")
        
        if out_dir := os.getenv("CPHI_OUT_DIR"):
            reports["out_dir"] = out_dir
        
        if verbose := os.getenv("CPHI_VERBOSE"):
            reports["verbose"] = verbose.lower() in ("true", "1", "yes")
        
        return config
    
    def validate(self):
        """Validate all configuration sections.
        
        Raises:
            ConfigurationError: If any section is invalid
        """
        self.numerics.validate()
        self.verification.validate()
        self.reports.validate()
    
    def to_dict(self) -> Dict[str, Any]:
        return {
            "numerics": self.numerics.to_dict(),
            "verification": self.verification.to_dict(),
            "reports": self.reports.to_dict(),
        }
    
    def save(self, path: Path):
        """Save configuration to TOML file.
        
        Args:
            path: Path to config file
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        
        with open(path, "w") as f:
            f.write("# cphi configuration\n")
            for section, values in self.to_dict().items():
                f.write(f"\n[{section}]\n")
                for key, value in values.items():
                    if isinstance(value, str):
                        f.write(f'{key} = "{value}"\n')
                    elif isinstance(value, bool):
                        f.write(f"{key} = {str(value).lower()}\n")
                    else:
                        f.write(f"{key} = {value!r}\n")


def get_config(project_dir: Optional[Path] = None) -> CphiConfig:
    """Get current cphi configuration.
    
    This is the main entry point for accessing configuration.
    
    Args:
        project_dir: Project directory (defaults to cwd)
        
    Returns:
        Loaded and validated configuration
    """
    return CphiConfig.load(project_dir)
