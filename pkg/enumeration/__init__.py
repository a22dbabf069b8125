"""Integer <-> tile matrix bijections and the even/odd bit split."""
