"""Stabilizer codes, decoders, and fault-tolerant circuit assembly."""
from .codes import CodeName, StabilizerCode, build_code, in_stabilizer_group
from .decoder import SyndromeTable, build_decoder, export_decoder_csv
from .encoder import encoder_circuit
from .extraction import AncillaPolicy, one_per_generator, reuse_pool, syndrome_extraction_circuit
from .logical import LogicalGateError, logical_gate
from .protected import ProtectedCircuitPlan, assemble_protected_circuit, decode_and_readout

__all__ = [
    "CodeName",
    "StabilizerCode",
    "build_code",
    "in_stabilizer_group",
    "SyndromeTable",
    "build_decoder",
    "export_decoder_csv",
    "encoder_circuit",
    "AncillaPolicy",
    "one_per_generator",
    "reuse_pool",
    "syndrome_extraction_circuit",
    "LogicalGateError",
    "logical_gate",
    "ProtectedCircuitPlan",
    "assemble_protected_circuit",
    "decode_and_readout",
]
