class NearFieldError(Exception):
    pass


class ConfigurationError(NearFieldError, ValueError):
    pass


class NumericalError(NearFieldError, ArithmeticError):
    """Base class of the numerical failures of a simulation run (CLI exit
    code 2).
    """
    pass


class SingularBasisError(NumericalError):

    def __init__(self, condition_number: float, *args):
        super().__init__(*args)
        self.condition_number = condition_number

    def __str__(self):
        return (
            f"singular combining basis: Gram condition number "
            f"{self.condition_number:.3e} exceeds 1e12"
        )


class EigenDecompositionError(NumericalError):
    pass


class PeakSearchError(NumericalError):
    pass


class InvalidMError(NumericalError):
    pass


class DegenerateCombinerError(NumericalError):
    pass
