"""Finger/channel identifiers shared by every module.

Channels are labelled with Roman numerals, thumb = I through little
finger = V, in that fixed order.
"""

FINGERS = ("I", "II", "III", "IV", "V")

N_CHANNELS = len(FINGERS)

_INDEX = {f: i for i, f in enumerate(FINGERS)}


def finger_index(finger: str) -> int:
    try:
        return _INDEX[finger]
    except KeyError:
        raise KeyError(f"unknown finger id {finger!r}; expected one of {FINGERS}") from None
