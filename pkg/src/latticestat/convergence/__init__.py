"""Convergence checkers, the certificate re-verifier and the theorem harness."""

from .checkers import (
    Decomposition,
    PreconditionError,
    Witness,
    check_doc,
    check_dopc,
    check_o_convergence,
    check_soc,
    check_socp,
    check_stat_order_bounded,
    construct_witness,
    decompose_stat_bounded,
)
from .certify import CertificateError, Recheck, recheck
