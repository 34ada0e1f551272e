#ifndef CRITNLS_VERSION_HPP
#define CRITNLS_VERSION_HPP

#define CRITNLS_VERSION "0.1.0"

#endif  // CRITNLS_VERSION_HPP
