import init, { group_summary, families, theta_check } from "./pkg/cherednik_wasm.js";

const $ = (id) => document.getElementById(id);

function table(headers, rows) {
  const t = document.createElement("table");
  const head = t.insertRow();
  for (const h of headers) {
    const th = document.createElement("th");
    th.textContent = h;
    head.appendChild(th);
  }
  for (const r of rows) {
    const tr = t.insertRow();
    for (const cell of r) tr.insertCell().textContent = cell;
  }
  return t;
}

function run(out, f) {
  const el = $(out);
  el.textContent = "computing…";
  // let the message paint before the blocking call
  setTimeout(() => {
    el.textContent = "";
    try {
      f(el);
    } catch (e) {
      el.innerHTML = `<p class="err"></p>`;
      el.firstChild.textContent = String(e);
    }
  }, 10);
}

function showGroup(el) {
  const r = JSON.parse(group_summary($("g-family").value, Number($("g-n").value), ""));
  const p = document.createElement("p");
  p.textContent = `${r.group}: |W| = ${r.order}, rank ${r.rank}, reflection classes ` +
    r.reflection_classes.map((c) => `${c.label} (${c.size})`).join(", ");
  el.append(p, table(["parabolic class", "rank", "|W_b|", "leaf dim"],
    r.strata.map((s) => [s.label, s.rank, s.order, s.leaf_dim])));
}

function showFamilies(el) {
  const r = JSON.parse(families($("f-family").value, Number($("f-n").value), $("f-c").value));
  const p = document.createElement("p");
  p.textContent = `${r.group}: dim H̄ = ${r.dim}; ${r.families.length} famil${r.families.length === 1 ? "y" : "ies"}`;
  el.append(p, table(["family"], r.families.map((f) => ["{" + f.join(", ") + "}"])));
}

function showTheta(el) {
  const r = JSON.parse(theta_check(Number($("t-m").value), $("t-class").value, $("t-c").value,
    Number($("t-k").value)));
  const p = document.createElement("p");
  p.className = r.all_zero ? "ok" : "err";
  p.textContent = `cosets ${r.cosets.join(", ")}; residuals modulo n(0)^${r.checked_at}: ` +
    (r.all_zero ? "all zero" : "nonzero");
  el.append(p, table(["relation", "residual"], r.rows.map((x) => [x.relation, x.residual_norm])));
}

await init();
$("g-run").onclick = () => run("g-out", showGroup);
$("f-run").onclick = () => run("f-out", showFamilies);
$("t-run").onclick = () => run("t-out", showTheta);
