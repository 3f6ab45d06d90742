"""List decoding of concatenated Reed-Muller/Reed-Solomon codes for PUF key
reproduction, with input-independent operation counts.

The functional core lives in the submodules; the most used names are
re-exported here.
"""

from .analysis import (BscModel, InnerChannel, block_error_probability, block_error_probability_unique,
                       capacity, entropy_bruteforce, inner_channel_mc, max_rate, rate_table)
from .concat import ConcatSpec, concat_decode, concat_encode
from .ctaudit import AuditVerdict, audit, predict_counts
from .exceptions import (ConfigError, FieldMismatchError, InstanceTooLarge, InternalSolvabilityViolation,
                         InversionOfZero, MessageTooLong, PufCodesError, RadiusTooLarge, TableTooLarge,
                         UsageError, ZeroPolynomial)
from .gf2m import FieldElement, FieldSpec, build_tables, fast_field
from .gsdecoder import DecodeResult, GsParams, decode_list, decode_unique, interpolate, root_find, select_params
from .keyflow import HelperBundle, ReproductionOutcome, enroll, preprocess_classical, preprocess_masked, reproduce
from .opcount import OpCountReport, counting
from .polyring import BivarPoly, UniPoly
from .rmcode import RmSpec, ml_decode, rm_encode
from .rscode import RsSpec, Word, encode

__version__ = "0.1.0"
