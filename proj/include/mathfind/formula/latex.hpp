#pragma once

#include <string_view>

#include "mathfind/formula/slt.hpp"

namespace mathfind {

/// Parse a closed LaTeX subset into a layout tree.
///
/// Supported: letters, digits and decimals, `+ - = < > * / ,`, `\leq \geq
/// \neq \prec \preceq \times \cdot \ast`, implicit multiplication, `^ _`,
/// `\frac{}{}`, `\sqrt{}`, `\sum \prod \int` with limits, `( ) [ ]`,
/// `\left`/`\right`, Greek letters, `\infty`, named functions (`\log`,
/// `\sin`, ...), prefix scripts written `{}^{a}_{b}X`, and spacing commands.
/// A run of two or more letters followed by `(` is one function token.
/// Anything else raises ParseError with the byte offset.
[[nodiscard]] SltTree parse_latex(std::string_view latex);

}  // namespace mathfind
