import init, { qbinomRows, taylor, invertXt } from "./pkg/twisted_wasm.js";

const $ = (id) => document.getElementById(id);

function show(out, f) {
  out.classList.remove("err");
  try {
    out.textContent = f();
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e.message ?? e);
  }
}

await init();

$("qb-go").onclick = () => show($("qb-out"), () => {
  const rows = JSON.parse(qbinomRows(Number($("qb-n").value), $("qb-q").value));
  return rows.map((row, n) => `n=${n}: ${row.join("  |  ")}`).join("\n");
});

$("ty-go").onclick = () => show($("ty-out"), () => {
  const t = JSON.parse(taylor($("ty-expr").value, $("ty-q").value, $("ty-h").value, Number($("ty-n").value)));
  return t.coeffs.map((c, k) => `c${k} = ${c}`).join("\n");
});

$("ix-go").onclick = () => show($("ix-out"), () => {
  const r = JSON.parse(invertXt($("ix-q").value, Number($("ix-n").value)));
  return `witness: ${r.witness}\ninverse: ${r.inverse}\ncheck:   ${r.check}`;
});
