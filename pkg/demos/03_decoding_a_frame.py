"""Decode one frame by hand: erasures, the lattice, and what the list decoder adds."""
import numpy as np

from polar_aloha import Packet, SlotFrame, psc_decode, pscl_decode, spa_v
from polar_aloha.channel import encode_frame, sec_transmit
from polar_aloha.spa import build_source_frame

r = 4
assignment = spa_v(5, 8, 0.3, r)
packets = [Packet(v, r) for v in (3, 9, 12, 5, 7)]
source = build_source_frame(packets, assignment)
frame = encode_frame(source)
sent = {i: source[i - 1] for i in assignment.info_set}

for trial in range(6):
    received = sec_transmit(frame, 0.3, seed=1, trial=trial)
    res = psc_decode(received, assignment.info_set, r)
    print(f"trial {trial}: erased slots {received.erased_slots()}, "
          f"residual {res.residual_erasures}, ok={res.success(sent)}")

# a frame pSC cannot finish
received = sec_transmit(frame, 0.3, seed=1, trial=0)
res = psc_decode(received, assignment.info_set, r)
lat = res.lattice
print("column 0 known masks:", [f"{int(k):x}" for k in lat.Qk[0]])
print("conflicts seen:", res.conflicts)

for L in (1, 4, 16):
    lres = pscl_decode(received, assignment.info_set, r, L)
    print(f"L={L:2d}: ok={lres.success(sent)} forks={len(lres.path.branch_history)} "
          f"metric={lres.path.metric.tolist()}")

# both slots gone: nothing any decoder can do
gone = SlotFrame.from_words(np.zeros(2, dtype=np.uint64), np.zeros(2, dtype=np.uint64), r)
print("all erased residual:", psc_decode(gone, {2}, r).residual_erasures)
