// The nine dashboard buttons, driven by clicks against the mocked API.

import { beforeEach, describe, expect, it } from "vitest";
import { NodeApi } from "../src/api";
import { App, mount } from "../src/ui";
import { ALICE, BOB, OWNER, defaultState, makeMockFetch, MockState } from "./mock_node";

const DIMER_CSV = "0,0,0\n1.122462,0,0\n";

async function flush(): Promise<void> {
  for (let i = 0; i < 6; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

function text(app: App, id: string): string {
  return app.byId(id).textContent ?? "";
}

function input(app: App, id: string, value: string): void {
  const node = app.byId<HTMLInputElement>(id);
  node.value = value;
  node.dispatchEvent(new Event("input", { bubbles: true }));
}

async function click(app: App, id: string): Promise<void> {
  (app.byId(id) as HTMLButtonElement).click();
  await flush();
}

let state: MockState;
let app: App;

async function connectAs(address: string): Promise<void> {
  await click(app, "btn-connect");
  const picker = app.byId<HTMLSelectElement>("wallet-picker");
  picker.value = address;
  picker.dispatchEvent(new Event("change", { bubbles: true }));
  await flush();
}

beforeEach(() => {
  document.body.innerHTML = "";
  state = defaultState();
  const api = new NodeApi("http://node.test", makeMockFetch(state));
  app = mount(document.body, api);
});

describe("CONNECT WALLET", () => {
  it("lists the node's dev wallets and selects one", async () => {
    await connectAs(ALICE);
    expect(app.session.wallet).toBe(ALICE);
    expect(text(app, "stat-address")).toBe(ALICE);
    // connecting refreshes: values shown verbatim from the API
    expect(text(app, "stat-ljt")).toBe("40");
  });

  it("shows an error banner when the node is down", async () => {
    document.body.innerHTML = "";
    app = mount(document.body, new NodeApi("http://node.test",
      makeMockFetch(state, { offline: true })));
    await click(app, "btn-connect");
    expect(text(app, "banner")).toContain("cannot reach node");
  });
});

describe("UPDATE BALANCE", () => {
  it("renders balances, access list and rate from the API", async () => {
    await connectAs(ALICE);
    await click(app, "btn-update");
    expect(text(app, "stat-ljt")).toBe(String(state.ljt[ALICE]));
    expect(text(app, "stat-native")).toBe("2");
    expect(text(app, "stat-access")).toBe("5");
    expect(text(app, "stat-rate")).toBe("100 (default)");
    expect(app.session.stale).toBe(false);
  });

  it("marks values stale when the refresh fails", async () => {
    document.body.innerHTML = "";
    const net = { offline: false };
    app = mount(document.body, new NodeApi("http://node.test", makeMockFetch(state, net)));
    await connectAs(ALICE);
    const before = text(app, "stat-ljt");
    net.offline = true;
    await click(app, "btn-update");
    expect(app.session.stale).toBe(true);
    expect(text(app, "stat-ljt")).toBe(before); // last-known value stays greyed
    expect(app.byId("wallet-stats").classList.contains("stale")).toBe(true);
    expect(text(app, "banner")).toContain("refresh failed");
  });
});

describe("TOP BALANCE/RATE", () => {
  it("renders both leaderboards", async () => {
    await connectAs(ALICE);
    await click(app, "btn-top");
    const balances = app.byId("top-balances").querySelectorAll("tr");
    const rates = app.byId("top-rates").querySelectorAll("tr");
    expect(balances.length).toBe(3); // header + owner + alice
    expect(rates.length).toBe(3);
    expect(app.byId("top-balances").textContent).toContain("1000");
  });
});

describe("SET YOUR RATE", () => {
  it("posts SetExchangeRate and refreshes", async () => {
    await connectAs(ALICE);
    input(app, "rate-input", "250");
    await click(app, "btn-set-rate");
    expect(state.rates[ALICE]).toBe(250);
    expect(text(app, "stat-rate")).toBe("250");
    expect(text(app, "trade-status")).toBe("rate updated");
  });

  it("owner below the floor sees the stored floor after refresh", async () => {
    await connectAs(OWNER);
    input(app, "rate-input", "50");
    await click(app, "btn-set-rate");
    expect(state.rates[OWNER]).toBe(100); // greed-limited
    expect(text(app, "stat-rate")).toBe("100");
  });
});

describe("TRADE", () => {
  it("previews 50 LJT for rate 100 and 0.5 coin, then buys", async () => {
    await connectAs(ALICE);
    input(app, "trade-seller", BOB);
    app.byId("trade-seller").dispatchEvent(new Event("change", { bubbles: true }));
    input(app, "trade-value", "0.5");
    await flush();
    expect(text(app, "trade-preview")).toBe("50 LJT");
    expect(app.byId<HTMLButtonElement>("btn-trade").disabled).toBe(false);
    state.ljt[BOB] = 200; // seller inventory
    await click(app, "btn-trade");
    expect(text(app, "trade-status")).toBe("trade complete");
    expect(state.ljt[ALICE]).toBe(90);
    expect(state.native[ALICE]).toBe(1_500_000_000);
    expect(text(app, "stat-ljt")).toBe("90"); // refreshed from the API
  });

  it("dust preview shows 0 and disables the trade button", async () => {
    await connectAs(ALICE);
    input(app, "trade-seller", BOB);
    app.byId("trade-seller").dispatchEvent(new Event("change", { bubbles: true }));
    input(app, "trade-value", "0.000000001");
    await flush();
    expect(text(app, "trade-preview")).toBe("0 LJT");
    expect(app.byId<HTMLButtonElement>("btn-trade").disabled).toBe(true);
  });

  it("renders distinct failure reasons", async () => {
    await connectAs(ALICE);
    input(app, "trade-seller", BOB);
    input(app, "trade-value", "1.5");
    state.ljt[BOB] = 10; // 150 tokens needed
    await click(app, "btn-trade");
    expect(text(app, "trade-status")).toBe("seller does not hold enough LJT");
    state.native[ALICE] = 0;
    await click(app, "btn-trade");
    expect(text(app, "trade-status")).toBe("your native balance is too low");
  });
});

describe("CSV upload and CALCULATE ENERGY", () => {
  it("plots the dimer and fills the energy field with -1.000000", async () => {
    await connectAs(ALICE);
    input(app, "csv-input", DIMER_CSV);
    expect(text(app, "plot-info")).toBe("2 particles plotted");
    expect(app.plot.pointCount).toBe(2);
    expect(app.plot.project()).toHaveLength(2);
    expect(app.byId<HTMLButtonElement>("btn-submit").disabled).toBe(false);
    await click(app, "btn-calc");
    expect(app.byId<HTMLInputElement>("energy-field").value).toBe("-1.000000");
  });

  it("shows per-line parse errors and disables submit", async () => {
    await connectAs(ALICE);
    input(app, "csv-input", "0,0\n1,2,3\n");
    expect(text(app, "csv-issues")).toContain("line 1");
    expect(app.byId<HTMLButtonElement>("btn-submit").disabled).toBe(true);
    expect(app.plot.pointCount).toBe(0);
  });
});

describe("SUBMIT (mineToken)", () => {
  it("renders the accepted MineResult and refreshes the balance", async () => {
    await connectAs(ALICE);
    input(app, "csv-input", DIMER_CSV);
    await click(app, "btn-submit");
    expect(text(app, "mine-status")).toContain("+10 LJT");
    expect(state.ljt[ALICE]).toBe(50);
    expect(text(app, "stat-ljt")).toBe("50");
    expect(state.contributors[2]).toBe(ALICE);
  });

  it("renders rejection with both energies", async () => {
    state.energies[2] = -2_000_000; // already better than the dimer's -1
    await connectAs(ALICE);
    input(app, "csv-input", DIMER_CSV);
    await click(app, "btn-submit");
    expect(text(app, "mine-status")).toContain("rejected");
    expect(text(app, "mine-status")).toContain("-1.000000");
    expect(text(app, "mine-status")).toContain("-2.000000");
  });
});

describe("QUERY and ADD ACCESS", () => {
  it("403 renders the access-required path; ADD ACCESS then unlocks it", async () => {
    await connectAs(ALICE);
    input(app, "n-field", "13");
    await click(app, "btn-query");
    expect(app.byId("access-required").classList.contains("hidden")).toBe(false);
    expect(text(app, "query-result")).toBe("");
    // the shortcut inside the access-required panel completes the flow
    await click(app, "btn-access-shortcut");
    expect(state.access[ALICE]).toContain(13);
    expect(text(app, "mine-status")).toBe("access granted for n=13");
    await click(app, "btn-query");
    expect(app.byId("access-required").classList.contains("hidden")).toBe(true);
    expect(text(app, "query-result")).toContain("-44.326801");
    expect(text(app, "plot-info")).toBe("13 particles plotted");
    expect(state.ljt[ALICE]).toBe(39); // one token fee paid
  });

  it("ADD ACCESS failure is rendered", async () => {
    state.ljt[ALICE] = 0;
    await connectAs(ALICE);
    input(app, "n-field", "4");
    await click(app, "btn-access");
    expect(text(app, "mine-status")).toBe("access failed: InsufficientBalance");
  });
});

describe("dashboard reachability", () => {
  it("all nine buttons exist on the single dashboard", () => {
    for (const id of ["btn-connect", "btn-update", "btn-top", "btn-set-rate",
                      "btn-trade", "btn-submit", "btn-calc", "btn-query",
                      "btn-access"]) {
      expect(app.byId(id).tagName).toBe("BUTTON");
    }
  });
});
