import { describe, expect, it } from "vitest";

import { bracketHalves, groupTeamSpan } from "../src/layout.js";
import type { ScheduleDoc, ScheduleOp } from "../src/types.js";

/** Round operations as served by GET /tournament for the two bundled
 * schedules (captured verbatim). */
const SPLIT_ROUNDS: ScheduleOp[][] = [
  [
    { kind: "merge", pairing: "cross", inputs: [[0, 0], [1, 1]], output: [0, 1] },
    { kind: "merge", pairing: "cross", inputs: [[2, 2], [3, 3]], output: [2, 3] },
    { kind: "merge", pairing: "cross", inputs: [[4, 4], [5, 5]], output: [4, 5] },
    { kind: "merge", pairing: "cross", inputs: [[6, 6], [7, 7]], output: [6, 7] },
  ],
  [
    { kind: "merge", pairing: "straight", inputs: [[0, 1], [2, 3]], output: [0, 3] },
    { kind: "merge", pairing: "straight", inputs: [[4, 5], [6, 7]], output: [4, 7] },
  ],
  [
    { kind: "collapse", pairing: null, inputs: [[0, 3]], output: [0, 3] },
    { kind: "collapse", pairing: null, inputs: [[4, 7]], output: [4, 7] },
  ],
  [
    { kind: "merge_singles", pairing: null, inputs: [[0, 3], [4, 7]], output: [0, 7] },
  ],
];

const MIXING_ROUNDS: ScheduleOp[][] = [
  SPLIT_ROUNDS[0],
  SPLIT_ROUNDS[1],
  [
    { kind: "merge", pairing: "straight", inputs: [[0, 3], [4, 7]], output: [0, 7] },
  ],
  [{ kind: "collapse", pairing: null, inputs: [[0, 7]], output: [0, 7] }],
];

function schedule(rounds: ScheduleOp[][]): ScheduleDoc {
  return {
    name: "test",
    num_groups: 8,
    group_size: 4,
    round_labels: ["L16", "QF", "SF", "F"],
    rounds,
    bracket_group_order: ["A", "C", "E", "G", "B", "D", "F", "H"],
  };
}

describe("bracketHalves", () => {
  it("finds the two halves of a split schedule", () => {
    const halves = bracketHalves(schedule(SPLIT_ROUNDS));
    expect(halves).toEqual({ a: [0, 15], b: [16, 31] });
  });

  it("returns null when pools mix before the last round", () => {
    expect(bracketHalves(schedule(MIXING_ROUNDS))).toBeNull();
  });

  it("returns null for overlapping pools", () => {
    const overlapping: ScheduleOp[][] = [
      [
        {
          kind: "merge_singles",
          pairing: null,
          inputs: [[0, 4], [3, 7]],
          output: [0, 7],
        },
      ],
    ];
    expect(bracketHalves(schedule(overlapping))).toBeNull();
  });
});

describe("groupTeamSpan", () => {
  it("maps positional groups to team index spans", () => {
    const doc = schedule(SPLIT_ROUNDS);
    expect(groupTeamSpan(doc, 0)).toEqual([0, 3]);
    expect(groupTeamSpan(doc, 7)).toEqual([28, 31]);
  });
});
