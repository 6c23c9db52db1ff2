"""Evolving 3-threshold secret sharing over binary fields.

A dealer hands each arriving participant a fixed bundle of five small
pieces; any three participants, from any mix of arrival generations,
recover the secret exactly, and fewer than three learn nothing.  The
package also carries a deliberately flawed prior variant of the bundle
construction together with the two-colluder attack that breaks it, and
an exhaustive auditor that certifies secrecy claims with exact
rational probabilities on small instances.
"""

from .audit import (
    AuditCell,
    AuditReport,
    audit_evolving,
    audit_intergen,
    audit_static,
    bundle_transcript,
)
from .conventional import (
    CurveShare,
    LeakReport,
    QuadraticDealer,
    SchemeParams,
    leak_report,
    reconstruct_pair_with_forward,
    reconstruct_three,
)
from .errors import (
    CapacityError,
    FormatError,
    ParameterError,
    SharingError,
    VerificationError,
)
from .evolving import (
    BundleSizes,
    EvolvingDealer,
    IntergenShare,
    QuadraticIntergen,
    ShareBundle,
    intergen_width_for,
    reconstruct,
    size_table,
)
from .flawed import (
    FlawedBundle,
    FlawedDealer,
    attack_transcript_sweep,
    flawed_reconstruct,
    two_party_attack,
)
from .generations import GenerationLayout, ParticipantLocus, ceil_log2
from .gf2 import BaseField
from .gfext import ExtField
from .randomness import Sha256Bits, SystemBits, source_from_seed
from .shareio import (
    bundle_to_bytes,
    bytes_to_bundle,
    read_share_file,
    write_share_file,
)

__version__ = "0.1.0"

__all__ = [
    "AuditCell",
    "AuditReport",
    "BaseField",
    "BundleSizes",
    "CapacityError",
    "CurveShare",
    "EvolvingDealer",
    "ExtField",
    "FlawedBundle",
    "FlawedDealer",
    "FormatError",
    "GenerationLayout",
    "IntergenShare",
    "LeakReport",
    "ParameterError",
    "ParticipantLocus",
    "QuadraticDealer",
    "QuadraticIntergen",
    "SchemeParams",
    "Sha256Bits",
    "ShareBundle",
    "SharingError",
    "SystemBits",
    "VerificationError",
    "attack_transcript_sweep",
    "audit_evolving",
    "audit_intergen",
    "audit_static",
    "bundle_to_bytes",
    "bundle_transcript",
    "bytes_to_bundle",
    "ceil_log2",
    "flawed_reconstruct",
    "intergen_width_for",
    "leak_report",
    "read_share_file",
    "reconstruct",
    "reconstruct_pair_with_forward",
    "reconstruct_three",
    "size_table",
    "source_from_seed",
    "two_party_attack",
    "write_share_file",
]
