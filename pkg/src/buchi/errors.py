"""Exception types shared across the package."""


class BuchiError(Exception):
    pass


class InvalidInput(BuchiError, ValueError):
    """Bad modulus, non-canonical residue or violated precondition."""


class CapExceeded(BuchiError):
    """Modulus larger than the configured table cap."""


class ModulusMismatch(BuchiError, ValueError):
    """Two objects built for different moduli were combined."""


class BudgetExceeded(BuchiError):
    """An exhaustive oracle would enumerate more candidates than allowed."""
