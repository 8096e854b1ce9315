import { formatDelta, formatPercent } from "./format.js";
import { bracketHalves, groupTeamSpan } from "./layout.js";
import type { ViewSnapshot, ViewStore } from "./state.js";
import type {
  ComputeResponse,
  PinnedOutcome,
  PinResult,
  TeamResult,
  TournamentDoc,
} from "./types.js";

/** Everything on screen comes from the last /compute response: probabilities
 * and deltas are formatted verbatim, and the pin chips re-read the response's
 * echoed override list so the pin set shown is exactly the pin set last
 * sent. */
export function renderApp(
  root: HTMLElement,
  doc: TournamentDoc,
  store: ViewStore,
): void {
  root.textContent = "";

  const header = el("header", "app-header");
  header.appendChild(el("h1", "", doc.name));
  header.appendChild(
    el(
      "p",
      "subtitle",
      `rating scale σ = ${doc.sigma} · knockout rule: ${doc.knockout_rule}`,
    ),
  );
  const status = el("p", "status");
  header.appendChild(status);
  root.appendChild(header);

  const banner = el("div", "banner hidden");
  root.appendChild(banner);

  const pinsPanel = el("section", "pins");
  root.appendChild(pinsPanel);

  const groupsPanel = el("section", "groups");
  root.appendChild(groupsPanel);

  const knockoutPanel = buildKnockoutPanel(doc, store);
  root.appendChild(knockoutPanel);

  const bracketPanel = el("section", "bracket");
  root.appendChild(bracketPanel);

  store.subscribe((snapshot) => {
    renderStatus(status, snapshot);
    renderBanner(banner, snapshot, store);
    renderPins(pinsPanel, snapshot, store);
    renderGroups(groupsPanel, doc, snapshot, store);
    renderBracket(bracketPanel, doc, snapshot);
  });
}

function renderStatus(target: HTMLElement, snapshot: ViewSnapshot): void {
  const shown = snapshot.shown;
  if (!shown) {
    target.textContent = snapshot.busy ? "computing…" : "";
    return;
  }
  const combos = shown.combos;
  const busy = snapshot.busy ? " · computing…" : "";
  target.textContent =
    `${combos.total_full_range.toLocaleString("en-US")} combinations ` +
    `(${shown.overrides.length} pinned)` +
    busy;
}

function renderBanner(
  target: HTMLElement,
  snapshot: ViewSnapshot,
  store: ViewStore,
): void {
  target.textContent = "";
  if (!snapshot.error) {
    target.className = "banner hidden";
    return;
  }
  target.className = "banner error";
  target.appendChild(el("span", "", snapshot.error));
  if (snapshot.canRetry) {
    const retry = el("button", "retry", "retry") as HTMLButtonElement;
    retry.addEventListener("click", () => store.retry());
    target.appendChild(retry);
  }
}

function renderPins(
  target: HTMLElement,
  snapshot: ViewSnapshot,
  store: ViewStore,
): void {
  target.textContent = "";
  const shown = snapshot.shown;
  if (!shown) {
    return;
  }
  target.appendChild(el("h2", "", "Pinned outcomes"));
  if (shown.overrides.length === 0) {
    target.appendChild(el("p", "hint", "none — click a fixture below"));
    return;
  }
  const list = el("ul", "pin-chips");
  for (const pin of shown.overrides) {
    const item = el("li", "pin-chip", describePin(pin) + " ");
    const remove = el("button", "unpin", "×") as HTMLButtonElement;
    remove.title = "unpin";
    remove.addEventListener("click", () =>
      store.togglePin(pin.stage, pin.team_a, pin.team_b, pin.result),
    );
    item.appendChild(remove);
    list.appendChild(item);
  }
  target.appendChild(list);
}

function describePin(pin: PinnedOutcome): string {
  const stage = pin.stage === "group" ? "group" : "knockout";
  if (pin.result === "draw") {
    return `${stage}: ${pin.team_a} – ${pin.team_b} draw`;
  }
  const winner = pin.result === "a_wins" ? pin.team_a : pin.team_b;
  const loser = pin.result === "a_wins" ? pin.team_b : pin.team_a;
  return `${stage}: ${winner} over ${loser}`;
}

function renderGroups(
  target: HTMLElement,
  doc: TournamentDoc,
  snapshot: ViewSnapshot,
  store: ViewStore,
): void {
  target.textContent = "";
  const shown = snapshot.shown;
  if (!shown) {
    return;
  }
  target.appendChild(el("h2", "", "Groups"));
  const byIndex = new Map(shown.teams.map((t) => [t.index, t]));
  const grid = el("div", "group-grid");
  const numGroups = doc.schedule.num_groups;
  for (let g = 0; g < numGroups; g += 1) {
    const [lo, hi] = groupTeamSpan(doc.schedule, g);
    const members: TeamResult[] = [];
    for (let i = lo; i <= hi; i += 1) {
      const row = byIndex.get(i);
      if (row) {
        members.push(row);
      }
    }
    grid.appendChild(groupCard(doc, members, shown, snapshot, store));
  }
  target.appendChild(grid);
}

function groupCard(
  doc: TournamentDoc,
  members: TeamResult[],
  shown: ComputeResponse,
  snapshot: ViewSnapshot,
  store: ViewStore,
): HTMLElement {
  const card = el("div", "group-card");
  const label = members.length > 0 ? members[0].group : "?";
  card.appendChild(el("h3", "", `Group ${label}`));

  const table = el("table", "prob-table");
  const head = el("tr");
  head.appendChild(el("th", "", "team"));
  for (const stage of shown.labels) {
    head.appendChild(el("th", "num", stage));
  }
  table.appendChild(head);
  for (const team of members) {
    const row = el("tr");
    row.appendChild(el("td", "", team.team));
    for (const stage of shown.labels) {
      const value = stage === "W" ? team.win : team.reach[stage];
      const delta = stage === "W" ? team.delta_win : team.delta_reach[stage];
      row.appendChild(probCell(value, delta));
    }
    table.appendChild(row);
  }
  card.appendChild(table);

  const fixtures = el("div", "fixtures");
  for (let i = 0; i < members.length; i += 1) {
    for (let j = i + 1; j < members.length; j += 1) {
      fixtures.appendChild(
        fixtureRow(members[i].team, members[j].team, shown, store),
      );
    }
  }
  card.appendChild(fixtures);
  return card;
}

function probCell(value: number, delta: number): HTMLElement {
  const cell = el("td", "num", formatPercent(value));
  const badge = formatDelta(delta);
  if (badge !== "") {
    const span = el(
      "span",
      delta > 0 ? "delta up" : "delta down",
      ` ${badge}`,
    );
    cell.appendChild(span);
  }
  return cell;
}

/** One clickable group fixture: three buttons pinning home win, draw, or
 * away win.  Active state reflects the server's echoed pin set only. */
function fixtureRow(
  teamA: string,
  teamB: string,
  shown: ComputeResponse,
  store: ViewStore,
): HTMLElement {
  const row = el("div", "fixture");
  row.appendChild(el("span", "fixture-names", `${teamA} – ${teamB}`));
  const choices: Array<[string, PinResult]> = [
    ["1", "a_wins"],
    ["X", "draw"],
    ["2", "b_wins"],
  ];
  for (const [glyph, result] of choices) {
    const button = el("button", "pin-btn", glyph) as HTMLButtonElement;
    button.title =
      result === "draw"
        ? `${teamA} and ${teamB} draw`
        : `${result === "a_wins" ? teamA : teamB} wins`;
    if (isPinned(shown.overrides, "group", teamA, teamB, result)) {
      button.classList.add("active");
    }
    button.addEventListener("click", () =>
      store.togglePin("group", teamA, teamB, result),
    );
    row.appendChild(button);
  }
  return row;
}

function isPinned(
  pins: readonly PinnedOutcome[],
  stage: string,
  teamA: string,
  teamB: string,
  result: PinResult,
): boolean {
  const winner =
    result === "draw" ? "draw" : result === "a_wins" ? teamA : teamB;
  return pins.some((pin) => {
    if (pin.stage !== stage) {
      return false;
    }
    const samePair =
      (pin.team_a === teamA && pin.team_b === teamB) ||
      (pin.team_a === teamB && pin.team_b === teamA);
    if (!samePair) {
      return false;
    }
    const pinWinner =
      pin.result === "draw"
        ? "draw"
        : pin.result === "a_wins"
          ? pin.team_a
          : pin.team_b;
    return pinWinner === winner;
  });
}

/** Knockout pins take a picker because knockout pairings are not fixed in
 * advance; draws are impossible here so no draw control exists. */
function buildKnockoutPanel(doc: TournamentDoc, store: ViewStore): HTMLElement {
  const panel = el("section", "knockout");
  panel.appendChild(el("h2", "", "Knockout pin"));
  panel.appendChild(
    el(
      "p",
      "hint",
      "Fix a knockout meeting, should it happen. Draws cannot be pinned in knockout rounds.",
    ),
  );
  const names = doc.teams.map((t) => t.team);
  const selectA = buildSelect(names, 0);
  const selectB = buildSelect(names, 1);
  const firstWins = el("button", "pin-btn", "left wins") as HTMLButtonElement;
  const secondWins = el("button", "pin-btn", "right wins") as HTMLButtonElement;
  const note = el("span", "hint");
  const pinKnockout = (result: PinResult) => {
    note.textContent = "";
    if (selectA.value === selectB.value) {
      note.textContent = "pick two different teams";
      return;
    }
    store.togglePin("knockout", selectA.value, selectB.value, result);
  };
  firstWins.addEventListener("click", () => pinKnockout("a_wins"));
  secondWins.addEventListener("click", () => pinKnockout("b_wins"));
  const controls = el("div", "knockout-controls");
  controls.appendChild(selectA);
  controls.appendChild(firstWins);
  controls.appendChild(el("span", "", " vs "));
  controls.appendChild(selectB);
  controls.appendChild(secondWins);
  controls.appendChild(note);
  panel.appendChild(controls);
  return panel;
}

function buildSelect(names: string[], selected: number): HTMLSelectElement {
  const select = document.createElement("select");
  names.forEach((name, i) => {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    option.selected = i === selected;
    select.appendChild(option);
  });
  return select;
}

function renderBracket(
  target: HTMLElement,
  doc: TournamentDoc,
  snapshot: ViewSnapshot,
): void {
  target.textContent = "";
  const shown = snapshot.shown;
  if (!shown) {
    return;
  }
  target.appendChild(el("h2", "", "Bracket"));
  const halves = bracketHalves(doc.schedule);
  const labels = shown.labels;
  const columns = el("div", "bracket-columns");
  for (let i = 0; i < labels.length; i += 1) {
    const stage = labels[i];
    const survivors = Math.max(
      1,
      Math.round(shown.teams.length / 2 ** (i + 1)),
    );
    const column = el("div", "bracket-column");
    column.appendChild(el("h4", "", stage));
    const splitHere = halves !== null && i < labels.length - 2;
    if (splitHere && halves) {
      column.appendChild(
        bracketList(shown, stage, survivors / 2, halves.a, "half"),
      );
      column.appendChild(el("div", "half-divider"));
      column.appendChild(
        bracketList(shown, stage, survivors / 2, halves.b, "half"),
      );
    } else {
      column.appendChild(bracketList(shown, stage, survivors, null, ""));
    }
    columns.appendChild(column);
  }
  target.appendChild(columns);
  if (halves !== null) {
    target.appendChild(
      el("p", "hint", "The two halves first meet in the final."),
    );
  }
}

/** Top teams by reach for one stage, optionally restricted to a half. */
function bracketList(
  shown: ComputeResponse,
  stage: string,
  count: number,
  span: [number, number] | null,
  cssClass: string,
): HTMLElement {
  const eligible = shown.teams.filter(
    (team) => span === null || (team.index >= span[0] && team.index <= span[1]),
  );
  const ranked = eligible
    .slice()
    .sort((a, b) => valueFor(b, stage) - valueFor(a, stage))
    .slice(0, Math.max(1, Math.floor(count)));
  const list = el("ol", `bracket-list ${cssClass}`.trim());
  for (const team of ranked) {
    const item = el("li");
    item.appendChild(el("span", "", team.team));
    const value = valueFor(team, stage);
    const delta = stage === "W" ? team.delta_win : team.delta_reach[stage];
    const cell = el("span", "num", ` ${formatPercent(value)}`);
    const badge = formatDelta(delta);
    if (badge !== "") {
      cell.appendChild(
        el("span", delta > 0 ? "delta up" : "delta down", ` ${badge}`),
      );
    }
    item.appendChild(cell);
    list.appendChild(item);
  }
  return list;
}

function valueFor(team: TeamResult, stage: string): number {
  return stage === "W" ? team.win : team.reach[stage];
}

function el(tag: string, cssClass = "", text = ""): HTMLElement {
  const node = document.createElement(tag);
  if (cssClass) {
    node.className = cssClass;
  }
  if (text) {
    node.textContent = text;
  }
  return node;
}
