// Dashboard wiring: builds the panels and connects the nine buttons
// (CONNECT WALLET, UPDATE BALANCE, TOP BALANCE/RATE, SET YOUR RATE, TRADE,
// SUBMIT, CALCULATE ENERGY, QUERY, ADD ACCESS) to the node API.

import { ApiError, NodeApi, Receipt } from "./api";
import { parsePositionsCsv } from "./csv";
import {
  formatBaseUnits,
  formatEnergyMicro,
  parseCoinsToBaseUnits,
  previewTokens,
  shortAddress,
} from "./format";
import { ScatterPlot } from "./plot";
import { newSession, Session } from "./state";

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text) node.textContent = text;
  return node;
}

export class App {
  readonly session: Session;
  readonly plot: ScatterPlot;
  private doc: Document;

  constructor(
    root: HTMLElement,
    readonly api: NodeApi,
  ) {
    this.doc = root.ownerDocument;
    this.session = newSession(api.baseUrl);
    root.appendChild(this.build());
    this.plot = new ScatterPlot(this.byId<HTMLCanvasElement>("plot-canvas"));
    this.wire();
  }

  byId<T extends HTMLElement = HTMLElement>(id: string): T {
    const node = this.doc.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
  }

  private build(): HTMLElement {
    const doc = this.doc;
    const main = el(doc, "main", { class: "app" });
    main.appendChild(el(doc, "h1", {}, "Lennard-Jones Token"));
    main.appendChild(el(doc, "div", { id: "banner", class: "banner hidden" }));

    // wallet panel
    const wallet = el(doc, "section", { class: "panel", id: "wallet-panel" });
    wallet.appendChild(el(doc, "h2", {}, "Wallet"));
    wallet.appendChild(el(doc, "button", { id: "btn-connect" }, "CONNECT WALLET"));
    wallet.appendChild(el(doc, "select", { id: "wallet-picker", class: "hidden" }));
    wallet.appendChild(el(doc, "button", { id: "btn-update" }, "UPDATE BALANCE"));
    const stats = el(doc, "dl", { id: "wallet-stats" });
    for (const [id, label] of [
      ["stat-address", "Address"],
      ["stat-native", "Native (coins)"],
      ["stat-ljt", "LJT"],
      ["stat-access", "Data access"],
      ["stat-rate", "Your rate"],
    ]) {
      stats.appendChild(el(doc, "dt", {}, label));
      stats.appendChild(el(doc, "dd", { id }, "—"));
    }
    wallet.appendChild(stats);
    main.appendChild(wallet);

    // market panel
    const market = el(doc, "section", { class: "panel", id: "market-panel" });
    market.appendChild(el(doc, "h2", {}, "Market"));
    market.appendChild(el(doc, "button", { id: "btn-top" }, "TOP BALANCE/RATE"));
    market.appendChild(el(doc, "table", { id: "top-balances" }));
    market.appendChild(el(doc, "table", { id: "top-rates" }));
    market.appendChild(el(doc, "label", {}, "Rate (LJT/coin)"));
    market.appendChild(el(doc, "input", { id: "rate-input", value: "100" }));
    market.appendChild(el(doc, "button", { id: "btn-set-rate" }, "SET YOUR RATE"));
    market.appendChild(el(doc, "label", {}, "Seller"));
    market.appendChild(el(doc, "input", { id: "trade-seller" }));
    market.appendChild(el(doc, "label", {}, "Value (coins)"));
    market.appendChild(el(doc, "input", { id: "trade-value", value: "0.5" }));
    market.appendChild(el(doc, "span", { id: "trade-preview" }, "—"));
    market.appendChild(el(doc, "button", { id: "btn-trade" }, "TRADE"));
    market.appendChild(el(doc, "div", { id: "trade-status" }));
    main.appendChild(market);

    // mining / data panel
    const mine = el(doc, "section", { class: "panel", id: "mine-panel" });
    mine.appendChild(el(doc, "h2", {}, "Mine & Query"));
    mine.appendChild(el(doc, "textarea", { id: "csv-input", rows: "6", placeholder: "x,y,z per line (sigma units)" }));
    mine.appendChild(el(doc, "div", { id: "csv-issues" }));
    mine.appendChild(el(doc, "div", { id: "plot-info" }, "no particles"));
    const canvas = el(doc, "canvas", { id: "plot-canvas", width: "360", height: "360" });
    mine.appendChild(canvas);
    mine.appendChild(el(doc, "button", { id: "btn-calc" }, "CALCULATE ENERGY"));
    mine.appendChild(el(doc, "label", {}, "Energy"));
    mine.appendChild(el(doc, "input", { id: "energy-field", readonly: "readonly" }));
    const submit = el(doc, "button", { id: "btn-submit" }, "SUBMIT");
    submit.setAttribute("disabled", "disabled");
    mine.appendChild(submit);
    mine.appendChild(el(doc, "div", { id: "mine-status" }));
    mine.appendChild(el(doc, "label", {}, "Num. particles"));
    mine.appendChild(el(doc, "input", { id: "n-field", value: "13" }));
    mine.appendChild(el(doc, "button", { id: "btn-query" }, "QUERY"));
    mine.appendChild(el(doc, "button", { id: "btn-access" }, "ADD ACCESS"));
    const denied = el(doc, "div", { id: "access-required", class: "hidden" });
    denied.appendChild(el(doc, "span", {}, "access required — "));
    denied.appendChild(el(doc, "button", { id: "btn-access-shortcut" }, "ADD ACCESS"));
    mine.appendChild(denied);
    mine.appendChild(el(doc, "div", { id: "query-result" }));
    main.appendChild(mine);
    return main;
  }

  private wire(): void {
    this.byId("btn-connect").addEventListener("click", () => void this.connectWallet());
    this.byId("wallet-picker").addEventListener("change", () => void this.pickWallet());
    this.byId("btn-update").addEventListener("click", () => void this.refresh());
    this.byId("btn-top").addEventListener("click", () => void this.refreshTop());
    this.byId("btn-set-rate").addEventListener("click", () => void this.setRate());
    this.byId("trade-seller").addEventListener("change", () => void this.updateTradePreview());
    this.byId("trade-value").addEventListener("input", () => void this.updateTradePreview());
    this.byId("btn-trade").addEventListener("click", () => void this.trade());
    this.byId("csv-input").addEventListener("input", () => this.parseCsv());
    this.byId("btn-calc").addEventListener("click", () => void this.calcEnergy());
    this.byId("btn-submit").addEventListener("click", () => void this.submitMine());
    this.byId("btn-query").addEventListener("click", () => void this.query());
    for (const id of ["btn-access", "btn-access-shortcut"]) {
      this.byId(id).addEventListener("click", () => void this.addAccess());
    }
  }

  private banner(message: string | null): void {
    const banner = this.byId("banner");
    if (message === null) {
      banner.classList.add("hidden");
      banner.textContent = "";
    } else {
      banner.classList.remove("hidden");
      banner.textContent = message;
    }
  }

  private markStale(stale: boolean): void {
    this.session.stale = stale;
    this.byId("wallet-stats").classList.toggle("stale", stale);
  }

  // -- CONNECT WALLET --

  async connectWallet(): Promise<void> {
    const picker = this.byId<HTMLSelectElement>("wallet-picker");
    try {
      const { addresses } = await this.api.wallets();
      picker.innerHTML = "";
      picker.appendChild(el(this.doc, "option", { value: "" }, "pick an address…"));
      for (const address of addresses) {
        picker.appendChild(el(this.doc, "option", { value: address }, shortAddress(address)));
      }
      picker.classList.remove("hidden");
      this.banner(null);
    } catch (err) {
      this.banner(`cannot reach node: ${(err as Error).message}`);
    }
  }

  async pickWallet(): Promise<void> {
    const picker = this.byId<HTMLSelectElement>("wallet-picker");
    if (!picker.value) return;
    this.session.wallet = picker.value;
    this.api.caller = picker.value;
    this.byId("stat-address").textContent = picker.value;
    await this.refresh();
  }

  // -- UPDATE BALANCE --

  async refresh(): Promise<void> {
    const wallet = this.session.wallet;
    if (!wallet) {
      this.banner("connect a wallet first");
      return;
    }
    try {
      const [balance, native, access, rate] = await Promise.all([
        this.api.balance(wallet),
        this.api.native(wallet),
        this.api.access(wallet),
        this.api.rates(wallet),
      ]);
      Object.assign(this.session, {
        balance,
        native,
        access,
        rate,
        refreshedAt: Date.now(),
      });
      // values rendered verbatim from the API payloads
      this.byId("stat-ljt").textContent = String(balance.ljt);
      this.byId("stat-native").textContent = formatBaseUnits(native.native);
      this.byId("stat-access").textContent =
        access.access.length > 0 ? access.access.join(", ") : "none";
      this.byId("stat-rate").textContent =
        `${rate.rate}${rate.explicit ? "" : " (default)"}`;
      this.markStale(false);
      this.banner(null);
    } catch (err) {
      this.markStale(true);
      this.banner(`refresh failed: ${(err as Error).message}`);
    }
  }

  // -- TOP BALANCE/RATE --

  async refreshTop(): Promise<void> {
    try {
      const [balances, rates] = await Promise.all([this.api.topBalances(), this.api.topRates()]);
      this.renderTable("top-balances", ["address", "LJT"], balances.balances);
      this.renderTable("top-rates", ["address", "LJT/coin"], rates.rates);
      this.banner(null);
    } catch (err) {
      this.banner(`cannot load leaderboards: ${(err as Error).message}`);
    }
  }

  private renderTable(id: string, headers: string[], rows: [string, number][]): void {
    const table = this.byId<HTMLTableElement>(id);
    table.innerHTML = "";
    const head = el(this.doc, "tr");
    for (const header of headers) head.appendChild(el(this.doc, "th", {}, header));
    table.appendChild(head);
    for (const [address, value] of rows) {
      const row = el(this.doc, "tr");
      row.appendChild(el(this.doc, "td", { title: address }, shortAddress(address)));
      row.appendChild(el(this.doc, "td", {}, String(value)));
      table.appendChild(row);
    }
  }

  // -- SET YOUR RATE --

  async setRate(): Promise<void> {
    const rate = Number(this.byId<HTMLInputElement>("rate-input").value);
    if (!Number.isInteger(rate) || rate < 1) {
      this.byId("trade-status").textContent = "rate must be a positive integer";
      return;
    }
    const receipt = await this.submitChecked({ type: "SetExchangeRate", rate });
    if (receipt?.ok) {
      this.byId("trade-status").textContent = "rate updated";
      await this.refresh();
    }
  }

  // -- TRADE --

  async updateTradePreview(): Promise<void> {
    const preview = this.byId("trade-preview");
    const tradeButton = this.byId<HTMLButtonElement>("btn-trade");
    try {
      const seller = this.byId<HTMLInputElement>("trade-seller").value.trim();
      const value = parseCoinsToBaseUnits(this.byId<HTMLInputElement>("trade-value").value);
      if (!seller) throw new Error("no seller");
      const { rate } = await this.api.rates(seller);
      const tokens = previewTokens(value, rate);
      preview.textContent = `${tokens} LJT`;
      tradeButton.disabled = tokens < 1n;
    } catch {
      preview.textContent = "—";
      tradeButton.disabled = true;
    }
  }

  async trade(): Promise<void> {
    const status = this.byId("trade-status");
    let value: bigint;
    try {
      value = parseCoinsToBaseUnits(this.byId<HTMLInputElement>("trade-value").value);
    } catch (err) {
      status.textContent = (err as Error).message;
      return;
    }
    const seller = this.byId<HTMLInputElement>("trade-seller").value.trim();
    const receipt = await this.submitChecked({
      type: "BuyToken",
      seller,
      value: Number(value),
    });
    if (!receipt) return;
    if (receipt.ok) {
      status.textContent = "trade complete";
      await this.refresh();
    } else {
      const reasons: Record<string, string> = {
        DustPurchase: "value too small: it buys 0 tokens",
        SellerInsufficientTokens: "seller does not hold enough LJT",
        InsufficientNative: "your native balance is too low",
      };
      status.textContent = reasons[receipt.error ?? ""] ?? `failed: ${receipt.error}`;
    }
  }

  // -- CSV upload / plot --

  parseCsv(): void {
    const text = this.byId<HTMLTextAreaElement>("csv-input").value;
    const issuesBox = this.byId("csv-issues");
    const submit = this.byId<HTMLButtonElement>("btn-submit");
    const { coords, issues } = parsePositionsCsv(text);
    issuesBox.innerHTML = "";
    for (const issue of issues) {
      issuesBox.appendChild(
        el(this.doc, "div", { class: "issue" }, `line ${issue.line}: ${issue.message}`),
      );
    }
    if (issues.length === 0 && coords.length > 0) {
      this.plot.setPointsMicro(coords);
      this.byId("plot-info").textContent = `${coords.length / 3} particles plotted`;
      submit.disabled = false;
    } else {
      this.plot.clear();
      this.byId("plot-info").textContent = "no particles";
      submit.disabled = true;
    }
    this.byId<HTMLInputElement>("energy-field").value = "";
  }

  // -- CALCULATE ENERGY --

  async calcEnergy(): Promise<void> {
    const csv = this.byId<HTMLTextAreaElement>("csv-input").value;
    try {
      const result = await this.api.calcEnergyCsv(csv);
      this.byId<HTMLInputElement>("energy-field").value = formatEnergyMicro(result.energy);
      this.banner(null);
    } catch (err) {
      this.byId("mine-status").textContent = `energy call failed: ${(err as Error).message}`;
    }
  }

  // -- SUBMIT (mineToken) --

  async submitMine(): Promise<void> {
    const status = this.byId("mine-status");
    const csv = this.byId<HTMLTextAreaElement>("csv-input").value;
    const receipt = await this.submitChecked({ type: "MineToken", csv });
    if (!receipt) return;
    const result = receipt.mine_result;
    if (receipt.ok && result?.accepted) {
      status.textContent =
        `accepted: +${result.reward} LJT (energy ${formatEnergyMicro(result.energy)})`;
      await this.refresh();
    } else if (receipt.ok && result) {
      status.textContent =
        `rejected: ${formatEnergyMicro(result.energy)} does not beat ` +
        `${formatEnergyMicro(result.previous_energy)} by 3%`;
    } else {
      status.textContent = `submission failed: ${receipt.error}`;
    }
  }

  // -- QUERY (viewData) --

  async query(): Promise<void> {
    const n = Number(this.byId<HTMLInputElement>("n-field").value);
    const resultBox = this.byId("query-result");
    const denied = this.byId("access-required");
    denied.classList.add("hidden");
    try {
      const data = await this.api.data(n);
      resultBox.textContent =
        `n=${data.n}: energy ${formatEnergyMicro(data.energy)}, ` +
        `contributor ${shortAddress(data.contributor)}`;
      this.plot.setPointsMicro(data.coords);
      this.byId("plot-info").textContent = `${data.coords.length / 3} particles plotted`;
    } catch (err) {
      if (err instanceof ApiError && err.status === 403) {
        denied.classList.remove("hidden");
        resultBox.textContent = "";
      } else {
        resultBox.textContent = `query failed: ${(err as Error).message}`;
      }
    }
  }

  // -- ADD ACCESS (gainAccess) --

  async addAccess(): Promise<void> {
    const n = Number(this.byId<HTMLInputElement>("n-field").value);
    const receipt = await this.submitChecked({ type: "GainAccess", n });
    if (!receipt) return;
    const status = this.byId("mine-status");
    if (receipt.ok) {
      status.textContent = `access granted for n=${n}`;
      this.byId("access-required").classList.add("hidden");
      await this.refresh();
    } else {
      status.textContent = `access failed: ${receipt.error}`;
    }
  }

  private async submitChecked(call: Parameters<NodeApi["submit"]>[0]): Promise<Receipt | null> {
    if (!this.session.wallet) {
      this.banner("connect a wallet first");
      return null;
    }
    try {
      const receipt = await this.api.submit(call);
      this.banner(null);
      return receipt;
    } catch (err) {
      this.banner(`transaction failed: ${(err as Error).message}`);
      return null;
    }
  }
}

export function mount(root: HTMLElement, api: NodeApi): App {
  return new App(root, api);
}
