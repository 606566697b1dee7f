import init, { reachability, synthesize, Session } from "./pkg/s4pr_demo.js";

const $ = (id) => document.getElementById(id);

function el(tag, attrs = {}, ...children) {
  const e = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) {
    if (k === "class") e.className = v;
    else if (k.startsWith("on")) e.addEventListener(k.slice(2), v);
    else e.setAttribute(k, v);
  }
  for (const c of children) e.append(c);
  return e;
}

function markingTable(places, rows) {
  const head = el("tr", {}, el("th", {}, "#"), ...places.map((p) => el("th", {}, p)));
  const body = rows.map((r, i) =>
    el("tr", { class: r.tag || "" }, el("td", {}, String(i + 1)), ...r.marking.map((v) => el("td", {}, String(v)))),
  );
  return el("table", {}, head, ...body);
}

function showError(e) {
  $("error").textContent = e ? String(e.message ?? e) : "";
}

function renderReach() {
  try {
    const r = JSON.parse(reachability(Number($("reach-units").value)));
    const dead = r.dead.length ? `<span class="bad">not live: ${r.dead.join(", ")}</span>` : `<span class="ok">all transitions live</span>`;
    const robust = r.markings.filter((m) => m.tag === "robust").length;
    const unrobust = r.markings.filter((m) => m.tag === "unrobust").length;
    const split = robust + unrobust ? ` <span class="pill">${robust} robust</span><span class="pill">${unrobust} non-robust</span>` : "";
    $("reach-summary").innerHTML =
      `<span class="pill">${r.nodes} markings</span><span class="pill">${r.edge_count} edges</span>` +
      `<span class="pill">${r.deadlocks} deadlocks</span>${split} ${dead}`;
    $("reach-table").replaceChildren(markingTable(r.places, r.markings));
    showError();
  } catch (e) {
    showError(e);
  }
}

function vectors(title, places, rows) {
  return el("div", {}, el("b", {}, title), markingTable(places, rows.map((m) => ({ marking: m }))));
}

function renderSynth() {
  try {
    const s = JSON.parse(
      synthesize($("synth-policy").value === "threshold", Number($("synth-amax").value), Number($("synth-bmax").value)),
    );
    const v = s.verification;
    const verdict = v.passed
      ? `<span class="ok">verified</span>: ${v.reachable_projections} reachable markings, no forbidden marking reachable`
      : `<span class="bad">verification failed</span>: ${v.forbidden_reached} forbidden reached, ${v.admissible_missing} admissible missing`;
    const summary = el("p");
    summary.innerHTML =
      `${s.forbidden} forbidden markings, projected on <code>${s.projection_places.join(", ")}</code>; ` +
      `${s.candidates} candidate constraints with a<sub>max</sub>=${s.a_max}, b<sub>max</sub>=${s.b_max}.<br>${verdict}`;
    const plan = el(
      "ul",
      {},
      ...s.constraints.map((c) => el("li", {}, el("code", {}, c.text), ` (monitor starts with ${c.tokens} token${c.tokens === 1 ? "" : "s"})`)),
    );
    $("synth-out").replaceChildren(
      summary,
      plan,
      el(
        "div",
        { class: "row" },
        vectors("maximal admissible", s.projection_places, s.admissible_reduced),
        vectors("minimal forbidden", s.projection_places, s.forbidden_reduced),
      ),
    );
    showError();
  } catch (e) {
    $("synth-out").replaceChildren();
    showError(e);
  }
}

let session;

function renderSim() {
  const s = JSON.parse(session.state());
  $("sim-model").innerHTML =
    `<span class="pill">${s.models[s.model]}</span>` +
    (s.monitors.length ? `<span class="pill">monitor tokens ${s.monitors.join(", ")}</span>` : "") +
    (s.robust ? `<span class="ok">robust marking</span>` : `<span class="bad">non-robust marking</span>`);
  $("sim-transitions").replaceChildren(
    ...s.transitions.map((t) => {
      const on = s.enabled.includes(t);
      return el("button", { class: on ? "enabled" : "", onclick: () => act(() => session.fire(t)) }, t);
    }),
  );
  $("sim-repair").disabled = s.model === 0;
  $("sim-marking").replaceChildren(markingTable(s.places, [{ marking: s.marking }]));
  $("sim-log").textContent = s.log
    .map((st) => `${String(st.step).padStart(3)}  ${st.accepted ? "ok " : "rej"}  model ${st.model}  ${st.event}${st.reason ? "  (" + st.reason + ")" : ""}`)
    .join("\n");
}

function act(f) {
  try {
    f();
    showError();
  } catch (e) {
    showError(e);
  }
  renderSim();
}

await init();
$("reach-units").addEventListener("change", renderReach);
$("synth-run").addEventListener("click", renderSynth);
$("sim-fail").addEventListener("click", () => act(() => session.fail()));
$("sim-repair").addEventListener("click", () => act(() => session.repair()));
$("sim-auto").addEventListener("click", () => act(() => session.auto(10)));
$("sim-reset").addEventListener("click", () => {
  session.free();
  session = new Session();
  renderSim();
});
session = new Session();
renderReach();
renderSynth();
renderSim();
