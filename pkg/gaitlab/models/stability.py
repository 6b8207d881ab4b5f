from enum import Enum


class StabilityClass(str, Enum):
    STATICALLY_STABLE = "statically_stable"
    STATICALLY_UNSTABLE = "statically_unstable"
    UNSTABLE = "unstable"
