"""Packets, collisions and the slot patterns users transmit with."""
import numpy as np

from polar_aloha import Packet, TernaryPacket, encode_frame, spa_v, star, superpose
from polar_aloha.spa import build_source_frame

# two packets colliding in a slot add up bitwise
a = Packet.from_bits([1, 0, 1])
b = Packet.from_bits([1, 1, 0])
print("a + b =", (a ^ b).bits)
print("(a + b) + b =", ((a ^ b) ^ b).bits)  # knowing b gives back a

# erased positions poison the sum position by position
x = TernaryPacket.from_symbols([1, "e", 0])
y = TernaryPacket.from_symbols([1, 1, "e"])
print("x * y =", star(x, y).symbols)

# eight slots, four users, erasure probability 0.5
assignment = spa_v(4, 8, 0.5)
print("capacity order:", assignment.order)
print("info set:", sorted(assignment.info_set, reverse=True))
for user, pattern in assignment.patterns.items():
    print(f"user {user}: row {pattern.row_index:d} -> slots {pattern.slots}")

# what the base station hears: every slot is the XOR of the users in it
packets = [Packet(v, 4) for v in (0x1, 0x2, 0x4, 0x8)]
heard = superpose(np.array([p.value for p in packets], dtype=np.uint64), assignment)
print("slots on air:", [f"{int(v):x}" for v in heard])

# same thing from the source-frame side
frame = encode_frame(build_source_frame(packets, assignment))
assert [s.value for s in frame.slots] == [int(v) for v in heard]
