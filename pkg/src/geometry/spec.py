"""
Body specifications
Validated, serializable descriptions of the bodies in the zoo
"""

import hashlib
from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

BodyKind = Literal["disk", "axis_square", "regular_polygon", "c_sigma", "c_one", "lens", "custom_profile"]


class BodySpec(BaseModel):
    """Kind plus the parameters that kind needs; center defaults to the origin"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: BodyKind
    r: Optional[float] = None
    side: Optional[float] = None
    k: Optional[int] = None
    circumradius: Optional[float] = None
    sigma: Optional[float] = None
    support: Optional[Tuple[float, ...]] = None
    center: Tuple[float, float] = (0.0, 0.0)

    @model_validator(mode="after")
    def _check_parameters(self):
        if self.kind == "disk":
            if self.r is None or self.r <= 0:
                raise ValueError("disk needs r > 0")
        elif self.kind == "axis_square":
            if self.side is None or self.side <= 0:
                raise ValueError("axis_square needs side > 0")
        elif self.kind == "regular_polygon":
            if self.k is None or self.k < 3:
                raise ValueError("regular_polygon needs k >= 3")
            if self.circumradius is None or self.circumradius <= 0:
                raise ValueError("regular_polygon needs circumradius > 0")
        elif self.kind in ("c_sigma", "lens"):
            if self.sigma is None or not 0.5 <= self.sigma < 1.0:
                raise ValueError(f"{self.kind} needs sigma in [1/2, 1)")
        elif self.kind == "custom_profile":
            if self.support is None or len(self.support) < 3:
                raise ValueError("custom_profile needs at least 3 support values")
        return self

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form"""
        return hashlib.sha256(self.model_dump_json().encode("utf-8")).hexdigest()

    def label(self) -> str:
        params = {key: value for key, value in self.model_dump(exclude={"kind", "center"}).items()
                  if value is not None}
        inner = ",".join(f"{key}={value}" for key, value in params.items() if key != "support")
        if "support" in params:
            inner = (inner + "," if inner else "") + f"support[{len(params['support'])}]"
        return f"{self.kind}({inner})"
