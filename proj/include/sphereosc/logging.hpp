#pragma once

namespace sphereosc {

/// Installs the default stderr logger. The level comes from SPHEREOSC_LOG
/// (trace, debug, info, warn, error, critical, off); unset means warn.
void init_logging();

}  // namespace sphereosc
