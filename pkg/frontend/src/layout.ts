import type { ScheduleDoc } from "./types.js";

/** Inclusive team-index spans of two bracket halves that never meet before
 * the last round. */
export interface BracketHalves {
  a: [number, number];
  b: [number, number];
}

/** Detect split-bracket schedules from the round operations alone: two
 * halves exist when the last round joins two disjoint single-survivor pools.
 * Schedules that mix earlier (a cross-pool pairing round before the last)
 * return null and render as one field. */
export function bracketHalves(schedule: ScheduleDoc): BracketHalves | null {
  const lastRound = schedule.rounds[schedule.rounds.length - 1];
  if (!lastRound || lastRound.length !== 1) {
    return null;
  }
  const op = lastRound[0];
  if (op.kind !== "merge_singles" || op.inputs.length !== 2) {
    return null;
  }
  const a = groupSpanToTeams(op.inputs[0], schedule.group_size);
  const b = groupSpanToTeams(op.inputs[1], schedule.group_size);
  if (a[1] >= b[0] && b[1] >= a[0]) {
    return null; // overlapping pools are not halves
  }
  return { a, b };
}

function groupSpanToTeams(
  span: [number, number],
  groupSize: number,
): [number, number] {
  return [span[0] * groupSize, (span[1] + 1) * groupSize - 1];
}

/** Positional group index -> inclusive team index span. */
export function groupTeamSpan(
  schedule: ScheduleDoc,
  group: number,
): [number, number] {
  return [group * schedule.group_size, (group + 1) * schedule.group_size - 1];
}
