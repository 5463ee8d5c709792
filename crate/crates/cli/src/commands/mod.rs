pub mod audit;
pub mod fig1;
pub mod measure;
pub mod monogamy;
