"""Canonical 22-DoF joint slot layout.

Indices run thumb -> little, base -> tip:

  thumb   ranks 1-5  -> slots  0-4   (ranks 1-2 variable axes, rank 3 +x,
                                      ranks 4-5 +y; ranks 1,2 and 3,4 are
                                      co-located pairs)
  index   ranks 1-4  -> slots  5-8   (rank 1 +x abduction, rest +y; ranks
  middle  ranks 1-4  -> slots  9-12   1,2 co-located)
  ring    ranks 1-4  -> slots 13-16
  little  ranks 1-5  -> slots 17-21  (rank 1 = extra base joint, +y in its
                                      own frame; rank 2 +x abduction; ranks
                                      2,3 co-located)
"""

from __future__ import annotations

from dataclasses import dataclass

N_SLOTS = 22
N_FINGERS = 5

THUMB, INDEX, MIDDLE, RING, LITTLE = range(5)
FINGERS = ("thumb", "index", "middle", "ring", "little")
SLOTS_PER_FINGER = (5, 4, 4, 4, 5)
FINGER_SLOT_START = (0, 5, 9, 13, 17)

AXIS_X = (1.0, 0.0, 0.0)
AXIS_Y = (0.0, 1.0, 0.0)

LITTLE_EXTRA_SLOT = 17

# Co-location groups per finger; link i of a finger is emitted iff group i
# holds at least one active slot.
FINGER_GROUPS = (
    ((0, 1), (2, 3), (4,)),
    ((5, 6), (7,), (8,)),
    ((9, 10), (11,), (12,)),
    ((13, 14), (15,), (16,)),
    ((18, 19), (20,), (21,)),  # little extra slot 17 sits outside the groups
)


@dataclass(frozen=True)
class CanonicalJointSlot:
    index: int
    finger: int
    rank: int
    default_axis: tuple[float, float, float] | None


def _build_slots() -> tuple[CanonicalJointSlot, ...]:
    slots = []
    for finger, (start, count) in enumerate(zip(FINGER_SLOT_START, SLOTS_PER_FINGER)):
        for rank in range(1, count + 1):
            idx = start + rank - 1
            if finger == THUMB:
                axis = None if rank <= 2 else (AXIS_X if rank == 3 else AXIS_Y)
            elif finger == LITTLE:
                # rank 1 is the extra joint (+y in its reordered frame),
                # rank 2 is the abduction slot
                axis = AXIS_X if rank == 2 else AXIS_Y
            else:
                axis = AXIS_X if rank == 1 else AXIS_Y
            slots.append(CanonicalJointSlot(idx, finger, rank, axis))
    return tuple(slots)


SLOTS: tuple[CanonicalJointSlot, ...] = _build_slots()

assert len(SLOTS) == N_SLOTS
assert sum(SLOTS_PER_FINGER) == N_SLOTS


def finger_slots(finger: int) -> range:
    start = FINGER_SLOT_START[finger]
    return range(start, start + SLOTS_PER_FINGER[finger])


def slot_of(finger: int, rank: int) -> int:
    if not 1 <= rank <= SLOTS_PER_FINGER[finger]:
        raise ValueError(f"finger {FINGERS[finger]} has no rank {rank}")
    return FINGER_SLOT_START[finger] + rank - 1


def slot_name(index: int) -> str:
    s = SLOTS[index]
    return f"{FINGERS[s.finger]}_joint{s.rank}"
