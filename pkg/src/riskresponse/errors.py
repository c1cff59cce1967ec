"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration: unknown keys, out-of-range values, or an
    inconsistent model description (e.g. a delay chain on an exogenous
    family)."""


class IntegrationError(RuntimeError):
    """Integration failed: non-finite values, a compartment driven below the
    negativity tolerance, or an adherence fraction escaping [0, 1]."""
