/** Wire types for the three service endpoints the UI consumes. */

export type Stage = "group" | "knockout";
export type PinResult = "a_wins" | "draw" | "b_wins";

/** A fixed match outcome, exactly as POSTed to /compute and echoed back. */
export interface PinnedOutcome {
  stage: Stage;
  team_a: string;
  team_b: string;
  result: PinResult;
}

export interface TeamInfo {
  index: number;
  team: string;
  group: string;
  rating: number;
}

export interface ScheduleOp {
  kind: "merge" | "collapse" | "merge_singles";
  pairing: "cross" | "straight" | null;
  /** Inclusive spans of positional group indices feeding this operation. */
  inputs: [number, number][];
  output: [number, number];
}

export interface ScheduleDoc {
  name: string;
  num_groups: number;
  group_size: number;
  round_labels: string[];
  rounds: ScheduleOp[][];
  bracket_group_order: string[];
}

export interface TournamentDoc {
  name: string;
  sigma: number;
  knockout_rule: string;
  teams: TeamInfo[];
  groups: Record<string, string[]>;
  overrides: PinnedOutcome[];
  schedule: ScheduleDoc;
}

export interface TeamResult {
  index: number;
  team: string;
  group: string;
  reach: Record<string, number>;
  win: number;
  delta_reach: Record<string, number>;
  delta_win: number;
}

export interface RoundCombos {
  label: string;
  full_range: number;
  support: number;
}

export interface ComputeResponse {
  labels: string[];
  teams: TeamResult[];
  /** The pin set this response was computed for, echoed verbatim. */
  overrides: PinnedOutcome[];
  combos: {
    rounds: RoundCombos[];
    total_full_range: number;
    total_support: number;
  };
}

export interface HealthDoc {
  status: string;
  config: string;
}
