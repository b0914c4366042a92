"""Polar slotted ALOHA over slot erasure channels."""
from .analysis import (ThroughputBounds, asymptotic_throughput, exact_success_probability,
                       offered_load, throughput_bounds)
from .channel import SlotFrame, encode_frame, polar_transform, sec_transmit, superpose
from .decoder import (DecodeResult, DecoderLattice, f_combine, g_combine, psc_decode,
                      pscl_decode)
from .irsa import DegreeDistribution, irsa_throughput, irsa_trial
from .metrics import (ChannelMetrics, capacity_order, compute_metrics, polarization_fraction,
                      sec_capacity)
from .packets import Packet, TernaryPacket, indicator, star, xor_packets
from .sim import SimConfig, SimResult, run_sweep
from .spa import (SlotPattern, SpaAssignment, build_source_frame, kernel_row, spa_f, spa_v)

__version__ = "0.1.0"
