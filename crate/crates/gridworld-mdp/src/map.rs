use thiserror::Error;

/// The five tile kinds a grid cell can take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TileKind {
    Safe,
    Frozen,
    Hole,
    HighReward,
    Goal,
}

impl TileKind {
    fn to_char(self) -> char {
        match self {
            TileKind::Safe => 'S',
            TileKind::Frozen => 'F',
            TileKind::Hole => 'H',
            TileKind::HighReward => 'A',
            TileKind::Goal => 'G',
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("row {row} has length {len}, expected {expected}")]
    RaggedRows { row: usize, len: usize, expected: usize },
    #[error("bad character {ch:?} at row {row}, col {col}")]
    BadChar { ch: char, row: usize, col: usize },
    #[error("map has no goal tile")]
    MissingGoal,
    #[error("map has more than one goal tile")]
    MultipleGoals,
    #[error("map has no start cell")]
    MissingStart,
    #[error("map has more than one start cell")]
    MultipleStarts,
}

/// A parsed tile grid. Tiles are stored row-major, top-left first; the start
/// cell is a `Safe` tile remembered by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridMap {
    width: usize,
    height: usize,
    tiles: Vec<TileKind>,
    start_index: usize,
}

impl GridMap {
    /// Parse a newline-separated map over the alphabet `{S,F,H,A,G,Y}`.
    ///
    /// `Y` marks the start cell (treated as `Safe` for reward purposes).
    /// A trailing newline is optional.
    pub fn parse(text: &str) -> Result<Self, MapError> {
        let mut rows: Vec<&str> = text.split('\n').collect();
        if rows.last() == Some(&"") {
            rows.pop();
        }

        let mut tiles = Vec::new();
        let mut start = None;
        let mut goal_count = 0usize;
        let width = rows.first().map_or(0, |r| r.chars().count());

        for (ri, row) in rows.iter().enumerate() {
            let len = row.chars().count();
            if len != width {
                return Err(MapError::RaggedRows { row: ri + 1, len, expected: width });
            }
            for (ci, ch) in row.chars().enumerate() {
                let tile = match ch {
                    'S' => TileKind::Safe,
                    'F' => TileKind::Frozen,
                    'H' => TileKind::Hole,
                    'A' => TileKind::HighReward,
                    'G' => TileKind::Goal,
                    'Y' => {
                        if start.is_some() {
                            return Err(MapError::MultipleStarts);
                        }
                        start = Some(tiles.len());
                        TileKind::Safe
                    }
                    other => return Err(MapError::BadChar { ch: other, row: ri + 1, col: ci + 1 }),
                };
                if tile == TileKind::Goal {
                    goal_count += 1;
                    if goal_count > 1 {
                        return Err(MapError::MultipleGoals);
                    }
                }
                tiles.push(tile);
            }
        }

        if goal_count == 0 {
            return Err(MapError::MissingGoal);
        }
        let start_index = start.ok_or(MapError::MissingStart)?;

        Ok(GridMap { width, height: rows.len(), tiles, start_index })
    }

    /// Render back to the text form `parse` accepts (trailing newline included).
    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity((self.width + 1) * self.height);
        for (i, tile) in self.tiles.iter().enumerate() {
            if i == self.start_index {
                out.push('Y');
            } else {
                out.push(tile.to_char());
            }
            if (i + 1) % self.width == 0 {
                out.push('\n');
            }
        }
        out
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn n_cells(&self) -> usize {
        self.tiles.len()
    }

    pub fn tiles(&self) -> &[TileKind] {
        &self.tiles
    }

    pub fn tile(&self, index: usize) -> TileKind {
        self.tiles[index]
    }

    pub fn start_index(&self) -> usize {
        self.start_index
    }

    pub fn goal_index(&self) -> usize {
        self.tiles
            .iter()
            .position(|&t| t == TileKind::Goal)
            .expect("a GridMap always holds exactly one goal")
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.height && col < self.width);
        row * self.width + col
    }

    pub fn row_col(&self, index: usize) -> (usize, usize) {
        (index / self.width, index % self.width)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_one_by_two() {
        let map = GridMap::parse("YG").unwrap();
        assert_eq!(map.width(), 2);
        assert_eq!(map.height(), 1);
        assert_eq!(map.start_index(), 0);
        assert_eq!(map.tiles(), &[TileKind::Safe, TileKind::Goal]);
    }

    #[test]
    fn parses_two_by_two() {
        let map = GridMap::parse("YF\nSG").unwrap();
        assert_eq!(map.width(), 2);
        assert_eq!(map.height(), 2);
        assert_eq!(map.start_index(), 0);
        assert_eq!(
            map.tiles(),
            &[TileKind::Safe, TileKind::Frozen, TileKind::Safe, TileKind::Goal]
        );
    }

    #[test]
    fn reports_bad_char_position() {
        let err = GridMap::parse("YG\nSQ").unwrap_err();
        assert_eq!(err, MapError::BadChar { ch: 'Q', row: 2, col: 2 });
    }

    #[test]
    fn rejects_ragged_rows() {
        let err = GridMap::parse("YG\nS").unwrap_err();
        assert_eq!(err, MapError::RaggedRows { row: 2, len: 1, expected: 2 });
    }

    #[test]
    fn rejects_goal_and_start_miscounts() {
        assert_eq!(GridMap::parse("YS").unwrap_err(), MapError::MissingGoal);
        assert_eq!(GridMap::parse("YGG").unwrap_err(), MapError::MultipleGoals);
        assert_eq!(GridMap::parse("SG").unwrap_err(), MapError::MissingStart);
        assert_eq!(GridMap::parse("YYG").unwrap_err(), MapError::MultipleStarts);
    }

    #[test]
    fn trailing_newline_is_optional() {
        assert_eq!(GridMap::parse("YG"), GridMap::parse("YG\n"));
    }

    #[test]
    fn serialize_round_trips() {
        let text = "YFHA\nSSSG\n";
        let map = GridMap::parse(text).unwrap();
        assert_eq!(map.serialize(), text);
        assert_eq!(GridMap::parse(&map.serialize()).unwrap(), map);
    }
}
