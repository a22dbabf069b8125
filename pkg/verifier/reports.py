"""Report models returned by the verifier operations."""

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from torus.array import Modulo, WindowSpec


class Witness(BaseModel):
    """A pattern occurring twice (duplicate) or never (missing) in one residue class."""

    kind: Literal["duplicate", "missing"]
    pattern: List[List[int]] = Field(..., description="Pattern rows as 0/1 lists")
    residue_class: Tuple[int, int]
    positions: List[Tuple[int, int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_positions(self) -> "Witness":
        if self.kind == "duplicate" and len(self.positions) < 2:
            raise ValueError("a duplicate witness needs at least two positions")
        if self.kind == "missing" and self.positions:
            raise ValueError("a missing witness has no positions")
        return self


class PerfectnessReport(BaseModel):
    """Verdict of one (s, t, p, q)-perfectness check."""

    report: Literal["perfectness"] = "perfectness"
    verdict: Literal["perfect", "not-perfect"]
    window: WindowSpec
    modulo: Modulo
    witness: Optional[Witness] = None
    positions_scanned: int = 0
    reason: Optional[str] = None

    @model_validator(mode="after")
    def _verdict_matches_witness(self) -> "PerfectnessReport":
        if (self.verdict == "perfect") != (self.witness is None):
            raise ValueError("verdict is perfect exactly when there is no witness")
        return self

    @property
    def perfect(self) -> bool:
        return self.verdict == "perfect"


class PartFailure(BaseModel):
    """An aligned part that failed, by its upper-left cell."""

    position: Tuple[int, int]
    report: PerfectnessReport


class LevelReport(BaseModel):
    """One subdivision level: parts of part_side checked with `rows` window rows."""

    rows: int
    part_side: int
    parts: int
    failing_parts: int = 0
    failures: List[PartFailure] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failing_parts == 0


class NestedReport(BaseModel):
    """Verdict of a nested check with one entry per level."""

    report: Literal["nested"] = "nested"
    n: Optional[int] = None
    window: WindowSpec
    modulo: Modulo
    nested: bool
    levels: List[LevelReport]
    reason: Optional[str] = None

    @model_validator(mode="after")
    def _nested_matches_levels(self) -> "NestedReport":
        if self.levels and self.nested != all(level.passed for level in self.levels):
            raise ValueError("nested verdict must equal all levels passing")
        return self


class CensusMember(BaseModel):
    """One (profile, Z) pair of the affine family and its nested verdict."""

    profile_index: int
    profile: List[int]
    z_index: int
    nested: bool


class CensusReport(BaseModel):
    """Totals over the generated members of the affine family."""

    report: Literal["census"] = "census"
    n: int
    mode: Literal["exhaustive", "sample"]
    family_size: int
    profile_count: int
    generated: int
    distinct: int
    nested: int
    seed: Optional[int] = None
    members: List[CensusMember] = Field(default_factory=list)

    @property
    def all_nested(self) -> bool:
        return self.nested == self.generated


class DecodeReport(BaseModel):
    """Position found by the decoder, with the scan result when one was run."""

    report: Literal["decode"] = "decode"
    n: int
    level: int
    part: Tuple[int, int]
    residue_class: Tuple[int, int]
    pattern: List[List[int]]
    position: Tuple[int, int]
    scan_count: Optional[int] = None
    scan_positions: Optional[List[Tuple[int, int]]] = None

    @property
    def agrees_with_scan(self) -> bool:
        return self.scan_positions is None or self.scan_positions == [self.position]
