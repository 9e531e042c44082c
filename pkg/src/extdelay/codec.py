"""k-bit message codec: the index of the encoder's maximum sample.

The entire communication budget of the scheme is one k-bit message per
block, carrying the argmax index of the encoder-visible slice. Bits are
MSB first so message dumps read naturally and are platform independent.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["ExtremumMessage", "encode_max_index", "decode_index"]


@dataclass(frozen=True)
class ExtremumMessage:
    """A k-character '0'/'1' string, most significant bit first."""

    bits: str
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if len(self.bits) != self.k:
            raise ValueError(
                f"message has {len(self.bits)} bits, expected exactly {self.k}"
            )
        if any(c not in "01" for c in self.bits):
            raise ValueError(f"malformed bit-string {self.bits!r}")


def encode_max_index(x_slice, k: int, counter=None) -> ExtremumMessage:
    """Encode the argmax index of x_slice as a k-bit message.

    Requires len(x_slice) <= 2^k so the index is representable. Ties have
    probability zero under the model but can occur in floating point; they
    break toward the smallest index to keep runs reproducible.
    """
    x = np.asarray(x_slice)
    n = x.size
    if n < 1:
        raise ValueError("cannot encode an empty slice")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n > 2**k:
        raise ValueError(f"{n} samples: index not representable in {k} bits")
    j = int(np.argmax(x))  # first occurrence wins on ties
    if counter is not None:
        counter.add(n)
    return ExtremumMessage(bits=format(j, f"0{int(k)}b"), k=int(k))


def decode_index(msg: ExtremumMessage) -> int:
    """Big-endian integer value of the message; inverse of encoding."""
    if len(msg.bits) != msg.k:
        raise ValueError(f"message has {len(msg.bits)} bits, expected {msg.k}")
    return int(msg.bits, 2)
