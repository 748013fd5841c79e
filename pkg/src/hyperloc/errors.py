"""Exception hierarchy.

Every error carries the name of the violated invariant or precondition so
that the CLI can emit machine-readable error objects.
"""


class HyperlocError(Exception):
    """Base class; `invariant` names the violated contract."""

    invariant = "error"

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context

    def payload(self):
        obj = {"type": type(self).__name__, "invariant": self.invariant,
               "message": self.message}
        if self.context:
            obj["context"] = {k: str(v) for k, v in self.context.items()}
        return obj


class ParseError(HyperlocError):
    invariant = "parse"


class TauProductUnsupported(HyperlocError):
    invariant = "tau_product"


class TauPresent(HyperlocError):
    invariant = "tau_free_input"


class ZeroColumn(HyperlocError):
    invariant = "no_zero_column"


class BadShape(HyperlocError):
    invariant = "shape"


class MinorsNotCoprime(HyperlocError):
    invariant = "coprime_minors"


class RankDeficient(HyperlocError):
    invariant = "full_row_rank"


class NotACovector(HyperlocError):
    invariant = "realizable_sign_vector"


class NotUnimodular(HyperlocError):
    invariant = "unimodular"


class PartialQSet(HyperlocError):
    invariant = "complete_attachment_scan"


class NotInChamber(HyperlocError):
    invariant = "projection_in_open_chamber"


class ValidationFailed(HyperlocError):
    invariant = "generator_validation"


class NonSymbol(HyperlocError):
    invariant = "pure_symbol"


class NotInFiltration(HyperlocError):
    invariant = "filtration_membership"


class BadM(HyperlocError):
    invariant = "cyclic_order"


class InternalInconsistency(HyperlocError):
    invariant = "internal_cross_check"
